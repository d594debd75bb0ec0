#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "roofwire/error.hpp"
#include "roofwire/metrics.hpp"

using namespace roofwire;

namespace {

Wireframe gable() {
    Wireframe wf;
    wf.corners = {{-10, 0, 0}, {10, 0, 0}, {10, 10, 0}, {-10, 10, 0}, {-10, 5, 5}, {10, 5, 5}};
    wf.wires = {Wire{0, 1}, Wire{2, 3}, Wire{0, 3}, Wire{1, 2}, Wire{4, 5},
                Wire{0, 4}, Wire{3, 4}, Wire{1, 5}, Wire{2, 5}};
    wf.canonicalize();
    return wf;
}

double total_length(const Wireframe& wf) {
    double s = 0;
    for (const Wire& w : wf.wires) s += wf.wire_length(w);
    return s;
}

std::vector<Vec3> random_corners(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng), z = u(rng) * 0.25;
        out.emplace_back(x, y, z);
    }
    return out;
}

void check_matching_valid(const CornerMatching& m, std::span<const Vec3> pred, std::span<const Vec3> gt) {
    std::vector<char> up(pred.size(), 0), ug(gt.size(), 0);
    for (const CornerPair& p : m.pairs) {
        CHECK(!up[p.pred]);
        CHECK(!ug[p.gt]);
        up[p.pred] = ug[p.gt] = 1;
        CHECK(p.distance == (pred[p.pred] - gt[p.gt]).norm());
        CHECK(p.distance <= m.threshold);
    }
    CHECK(std::is_sorted(m.pairs.begin(), m.pairs.end(),
                         [](const CornerPair& a, const CornerPair& b) { return a.pred < b.pred; }));
}

}  // namespace

TEST_CASE("exact self matching") {
    const Wireframe g = gable();
    const CornerMatching m = match_corners(g.corners, g.corners, 2.0);
    REQUIRE(m.pairs.size() == 6);
    for (const CornerPair& p : m.pairs) {
        CHECK(p.pred == p.gt);
        CHECK(p.distance == 0.0);
    }
}

TEST_CASE("out of range pairs stay unmatched") {
    const std::vector<Vec3> a{{0, 0, 0}}, b{{100, 0, 0}};
    CHECK(match_corners(a, b, 2.0).pairs.empty());
    CHECK(match_corners({}, b, 2.0).pairs.empty());
    CHECK_THROWS_AS(match_corners(a, b, 0.0), ContractError);
}

TEST_CASE("crossing configuration") {
    // greedy nearest-first would pair (0, 0) and leave 1 unmatched
    const std::vector<Vec3> pred{{1.0, 0, 0}, {0, 0, 0}};
    const std::vector<Vec3> gt{{0.5, 0, 0}, {2.0, 0, 0}};
    const CornerMatching m = match_corners(pred, gt, 1.2);
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.pairs[0].gt == 1);
    CHECK(m.pairs[1].gt == 0);
}

TEST_CASE("matching equals the brute-force optimum") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto pred = random_corners(rng, rng() % 7);
        const auto gt = random_corners(rng, rng() % 7);
        const double threshold = 0.5 + double(rng() % 4) * 0.5;
        const CornerMatching m = match_corners(pred, gt, threshold);
        const oracle::BestAssignment best = oracle::best_assignment(pred, gt, threshold);
        check_matching_valid(m, pred, gt);
        CHECK(m.pairs.size() == best.cardinality);
        CHECK(m.total_distance() == doctest::Approx(best.cost).epsilon(1e-12));

        const CornerMatching t = match_corners(gt, pred, threshold);
        REQUIRE(t.pairs.size() == m.pairs.size());
        std::vector<std::pair<std::size_t, std::size_t>> a, b;
        for (const CornerPair& p : m.pairs) a.emplace_back(p.pred, p.gt);
        for (const CornerPair& p : t.pairs) b.emplace_back(p.gt, p.pred);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("ties resolve to the lowest index pairs") {
    const std::vector<Vec3> pred{{0, 0, 0}, {0, 0, 0}};
    const std::vector<Vec3> gt{{1, 0, 0}};
    const CornerMatching m = match_corners(pred, gt, 2.0);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].pred == 0);
}

TEST_CASE("corner metrics arithmetic") {
    CornerMatching m;
    m.pairs = {{0, 0, 1.0}, {1, 2, 0.5}, {3, 5, 0.0}};
    const CornerMetrics c = corner_metrics(m, 4, 6);
    CHECK(c.cp == 75.0);
    CHECK(c.cr == 50.0);
    CHECK(c.cf1 == doctest::Approx(60.0));
    CHECK(c.aco == doctest::Approx(0.5));

    const CornerMetrics e = corner_metrics(CornerMatching{}, 0, 6);
    CHECK(e.cp == 0.0);
    CHECK(e.cr == 0.0);
    CHECK(e.cf1 == 0.0);
    CHECK(e.aco == 0.0);
}

TEST_CASE("f1_score") {
    CHECK(f1_score(0, 0) == 0.0);
    CHECK(f1_score(100, 100) == 100.0);
    CHECK(f1_score(50, 25) == doctest::Approx(100.0 / 3.0));
}

TEST_CASE("edge metrics") {
    const Wireframe g = gable();
    const CornerMatching self = match_corners(g.corners, g.corners, 2.0);
    const EdgeMetrics all = edge_metrics(g.wires, g.wires, self);
    CHECK(all.ep == 100.0);
    CHECK(all.er == 100.0);
    CHECK(all.ef1 == 100.0);

    const EdgeMetrics none = edge_metrics({}, g.wires, self);
    CHECK(none.ep == 0.0);
    CHECK(none.er == 0.0);

    // four gt wires, two predicted, one of them right
    Wireframe sq;
    sq.corners = {{0, 0, 0}, {5, 0, 0}, {5, 5, 0}, {0, 5, 0}};
    sq.wires = {Wire{0, 1}, Wire{1, 2}, Wire{2, 3}, Wire{0, 3}};
    const std::vector<Wire> pred{Wire{0, 1}, Wire{0, 2}};
    const EdgeMetrics e = edge_metrics(pred, sq.wires, match_corners(sq.corners, sq.corners, 1.0));
    CHECK(e.ep == 50.0);
    CHECK(e.er == 25.0);
    CHECK(e.ef1 == doctest::Approx(33.333333333333).epsilon(1e-10));
    CHECK(e.true_positives == 1);
}

TEST_CASE("wires between unmatched corners are false positives") {
    Wireframe gt;
    gt.corners = {{0, 0, 0}, {10, 0, 0}};
    gt.wires = {Wire{0, 1}};
    Wireframe pred;
    pred.corners = {{0, 0, 0}, {10, 5, 0}};
    pred.wires = {Wire{0, 1}};
    const EvalReport r = evaluate(pred, gt, 2.0);
    CHECK(r.cp == 50.0);
    CHECK(r.ep == 0.0);
    CHECK(r.er == 0.0);
}

TEST_CASE("wed examples") {
    const Wireframe g = gable();
    CHECK(evaluate(g, g).wed == 0.0);

    Wireframe unit;
    unit.corners = {{0, 0, 0}, {1, 0, 0}};
    unit.wires = {Wire{0, 1}};
    const Wireframe empty;
    CHECK(evaluate(empty, unit).wed == 1.0);

    Wireframe missing = g;
    const Wire eave{0, 1};
    missing.wires.erase(std::find(missing.wires.begin(), missing.wires.end(), eave));
    CHECK(evaluate(missing, g).wed == doctest::Approx(g.wire_length(eave) / total_length(g)).epsilon(1e-14));

    // one corner displaced by 0.5: its move cost only
    Wireframe moved = g;
    moved.corners[4].x() += 0.5;
    CHECK(evaluate(moved, g).wed == doctest::Approx(0.5 / total_length(g)).epsilon(1e-14));

    // an extra wire costs its own length
    Wireframe extra = g;
    extra.wires.push_back(Wire{0, 2});
    extra.canonicalize();
    CHECK(evaluate(extra, g).wed ==
          doctest::Approx(extra.wire_length(Wire{0, 2}) / total_length(g)).epsilon(1e-14));
}

TEST_CASE("evaluate identity and empty prediction") {
    const Wireframe g = gable();
    const EvalReport self = evaluate(g, g);
    for (double v : {self.cp, self.cr, self.cf1, self.ep, self.er, self.ef1}) CHECK(v == 100.0);
    CHECK(self.aco == 0.0);
    CHECK(self.wed == 0.0);

    const EvalReport e = evaluate(Wireframe{}, g);
    for (double v : {e.cp, e.cr, e.cf1, e.ep, e.er, e.ef1}) CHECK(v == 0.0);
    CHECK(e.wed == 1.0);
    CHECK(e.gt_corners == 6);
    CHECK(e.gt_wires == 9);
}

TEST_CASE("evaluate is invariant under corner relabelling") {
    const Wireframe g = gable();
    std::vector<std::size_t> perm(g.corners.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        Wireframe p;
        p.corners.resize(g.corners.size());
        for (std::size_t i = 0; i < perm.size(); ++i) p.corners[perm[i]] = g.corners[i];
        for (const Wire& w : g.wires) p.wires.push_back(Wire::make(perm[w.a], perm[w.b]));
        p.canonicalize();
        const EvalReport r = evaluate(p, g);
        CHECK(r.cf1 == 100.0);
        CHECK(r.ef1 == 100.0);
        CHECK(r.wed == 0.0);
    }
}

TEST_CASE("precision and recall swap with the arguments") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        Wireframe a, b;
        a.corners = random_corners(rng, 2 + rng() % 5);
        b.corners = random_corners(rng, 2 + rng() % 5);
        for (Wireframe* w : {&a, &b})
            for (std::size_t i = 0; i < w->corners.size(); ++i)
                for (std::size_t j = i + 1; j < w->corners.size(); ++j)
                    if (rng() % 2) w->wires.push_back(Wire{i, j});
        const EvalReport ab = evaluate(a, b), ba = evaluate(b, a);
        CHECK(ab.cp == ba.cr);
        CHECK(ab.cr == ba.cp);
        CHECK(ab.ep == ba.er);
        CHECK(ab.er == ba.ep);
        CHECK(ab.aco == doctest::Approx(ba.aco).epsilon(1e-12));
    }
}
