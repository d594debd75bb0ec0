#include "roofwire/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "roofwire/error.hpp"

namespace roofwire {

namespace {

// Hungarian method (shortest augmenting paths with potentials) for a rows x cols
// cost matrix with rows <= cols. Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {};
    const std::size_t m = cost.front().size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

bool lex_less(std::span<const Vec3> a, std::span<const Vec3> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Vec3& x, const Vec3& y) {
                                            return std::lexicographical_compare(
                                                x.data(), x.data() + 3, y.data(), y.data() + 3);
                                        });
}

double percent(std::size_t num, std::size_t den) {
    return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

double CornerMatching::total_distance() const {
    double sum = 0.0;
    for (const CornerPair& p : pairs) sum += p.distance;
    return sum;
}

double f1_score(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

CornerMatching match_corners(std::span<const Vec3> pred, std::span<const Vec3> gt, double threshold) {
    if (!(threshold > 0.0)) throw ContractError("matching threshold must be positive");
    CornerMatching result;
    result.threshold = threshold;
    if (pred.empty() || gt.empty()) return result;

    // Rows are the smaller side; equal sizes fall back to a coordinate comparison so
    // that match(a, b) and match(b, a) solve the same matrix.
    bool pred_rows = pred.size() < gt.size() || (pred.size() == gt.size() && !lex_less(gt, pred));
    const auto rows = pred_rows ? pred : gt;
    const auto cols = pred_rows ? gt : pred;

    // Each admissible pair earns a bonus larger than any total distance, so the
    // optimum maximizes the number of pairs first.
    const double bonus = threshold * static_cast<double>(rows.size() + 1) + 1.0;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size(), 0.0));
    std::vector<std::vector<double>> dist(rows.size(), std::vector<double>(cols.size(), 0.0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double d = (rows[r] - cols[c]).norm();
            dist[r][c] = d;
            if (d <= threshold) cost[r][c] = d - bonus;
        }

    const auto assignment = solve_assignment(cost);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t c = assignment[r];
        if (dist[r][c] > threshold) continue;
        result.pairs.push_back(pred_rows ? CornerPair{r, c, dist[r][c]} : CornerPair{c, r, dist[r][c]});
    }
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const CornerPair& a, const CornerPair& b) { return a.pred < b.pred; });
    return result;
}

CornerMetrics corner_metrics(const CornerMatching& matching, std::size_t n_pred, std::size_t n_gt) {
    CornerMetrics m;
    const std::size_t k = matching.pairs.size();
    m.cp = percent(k, n_pred);
    m.cr = percent(k, n_gt);
    m.cf1 = f1_score(m.cp, m.cr);
    m.aco = k ? matching.total_distance() / static_cast<double>(k) : 0.0;
    return m;
}

namespace {

// Predicted wires whose endpoints map onto a GT wire, as flags per predicted wire
// plus the set of credited GT wires.
std::pair<std::vector<bool>, std::set<Wire>> credit_wires(std::span<const Wire> pred_wires,
                                                          std::span<const Wire> gt_wires,
                                                          const CornerMatching& matching) {
    std::map<std::size_t, std::size_t> to_gt;
    for (const CornerPair& p : matching.pairs) to_gt[p.pred] = p.gt;
    const std::set<Wire> gt_set(gt_wires.begin(), gt_wires.end());
    std::set<Wire> credited;
    std::vector<bool> hit(pred_wires.size(), false);
    for (std::size_t i = 0; i < pred_wires.size(); ++i) {
        const auto a = to_gt.find(pred_wires[i].a);
        const auto b = to_gt.find(pred_wires[i].b);
        if (a == to_gt.end() || b == to_gt.end()) continue;
        const Wire mapped = Wire::make(a->second, b->second);
        if (gt_set.count(mapped) && credited.insert(mapped).second) hit[i] = true;
    }
    return {hit, credited};
}

}  // namespace

EdgeMetrics edge_metrics(std::span<const Wire> pred_wires, std::span<const Wire> gt_wires,
                         const CornerMatching& matching) {
    std::vector<Wire> gt_canon;
    gt_canon.reserve(gt_wires.size());
    for (const Wire& w : gt_wires) gt_canon.push_back(Wire::make(w.a, w.b));
    const auto [hit, credited] = credit_wires(pred_wires, gt_canon, matching);
    EdgeMetrics m;
    m.true_positives = credited.size();
    m.ep = percent(m.true_positives, pred_wires.size());
    m.er = percent(m.true_positives, gt_wires.size());
    m.ef1 = f1_score(m.ep, m.er);
    return m;
}

double wireframe_edit_distance(const Wireframe& pred, const Wireframe& gt, const CornerMatching& matching) {
    std::vector<Wire> gt_canon;
    for (const Wire& w : gt.wires) gt_canon.push_back(Wire::make(w.a, w.b));
    const auto [hit, credited] = credit_wires(pred.wires, gt_canon, matching);

    double numerator = matching.total_distance();
    double gt_total = 0.0;
    for (const Wire& w : gt_canon) {
        const double len = gt.wire_length(w);
        gt_total += len;
        if (!credited.count(w)) numerator += len;
    }
    for (std::size_t i = 0; i < pred.wires.size(); ++i)
        if (!hit[i]) numerator += pred.wire_length(pred.wires[i]);

    if (gt_total > 0.0) return numerator / gt_total;
    return pred.wires.empty() ? 0.0 : numerator;
}

EvalReport evaluate(const Wireframe& pred, const Wireframe& gt, double threshold) {
    pred.validate();
    gt.validate();
    const CornerMatching matching = match_corners(pred.corners, gt.corners, threshold);
    const CornerMetrics cm = corner_metrics(matching, pred.corners.size(), gt.corners.size());
    const EdgeMetrics em = edge_metrics(pred.wires, gt.wires, matching);

    EvalReport r;
    r.wed = wireframe_edit_distance(pred, gt, matching);
    r.aco = cm.aco;
    r.cp = cm.cp;
    r.cr = cm.cr;
    r.cf1 = cm.cf1;
    r.ep = em.ep;
    r.er = em.er;
    r.ef1 = em.ef1;
    r.pred_corners = pred.corners.size();
    r.gt_corners = gt.corners.size();
    r.matched_corners = matching.pairs.size();
    r.pred_wires = pred.wires.size();
    r.gt_wires = gt.wires.size();
    r.matched_wires = em.true_positives;
    r.threshold = threshold;
    return r;
}

}  // namespace roofwire
