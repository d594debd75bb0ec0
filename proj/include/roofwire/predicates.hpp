#pragma once

namespace roofwire::predicates {

struct Point2 {
    double x;
    double y;
};

// Sign of the signed area of (a, b, c): +1 counter-clockwise, -1 clockwise, 0 collinear.
// Exact: a floating-point filter decides the easy cases, rational arithmetic the rest.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

// +1 if d lies strictly inside the circumcircle of the counter-clockwise triangle
// (a, b, c), -1 if strictly outside, 0 if cocircular. Exact.
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

}  // namespace roofwire::predicates
