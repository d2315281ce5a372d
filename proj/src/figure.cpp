#include "geo/figure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace geo {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
    return true;
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double Figure::diameter() const {
    double d = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = i + 1; j < coords.size(); ++j)
            d = std::max(d, dist(coords[i], coords[j]));
    return d;
}

double Figure::length_tol(double eps) const { return eps * std::max(1.0, diameter()); }

bool Figure::collinear_coords(PointId a, PointId b, PointId c, double eps) const {
    Vec2 u = at(b) - at(a), v = at(c) - at(a);
    double scale = std::max(1.0, std::hypot(u.x, u.y) * std::hypot(v.x, v.y));
    return std::fabs(cross(u, v)) <= eps * scale;
}

bool Figure::segments_same_line(PointId a, PointId b, PointId c, PointId d, double eps) const {
    return collinear_coords(a, b, c, eps) && collinear_coords(a, b, d, eps);
}

bool Figure::opposite_sides(PointId a, PointId b, PointId u, PointId v, double eps) const {
    Vec2 d = at(v) - at(u);
    double s1 = cross(d, at(a) - at(u));
    double s2 = cross(d, at(b) - at(u));
    double tol = eps * std::max(1.0, diameter() * diameter());
    return (s1 > tol && s2 < -tol) || (s1 < -tol && s2 > tol);
}

bool Figure::same_side(PointId a, PointId b, PointId u, PointId v, double eps) const {
    Vec2 d = at(v) - at(u);
    double s1 = cross(d, at(a) - at(u));
    double s2 = cross(d, at(b) - at(u));
    double tol = eps * std::max(1.0, diameter() * diameter());
    return (s1 > tol && s2 > tol) || (s1 < -tol && s2 < -tol);
}

bool Figure::ray_strictly_inside_angle(PointId m, PointId a, PointId v, PointId b,
                                       double eps) const {
    // ray v->m strictly between rays v->a and v->b
    return same_side(m, b, v, a, eps) && same_side(m, a, v, b, eps);
}

std::optional<Figure> parse_figure(const std::string& text, FigureError* err) {
    auto fail = [&](int line, const std::string& msg) -> std::optional<Figure> {
        if (err) *err = {line, msg};
        return std::nullopt;
    };

    struct RawPoint {
        std::string name;
        double x, y;
        int line;
    };
    std::vector<RawPoint> raw_points;
    std::vector<std::pair<std::vector<std::string>, int>> deferred;  // segment/assume/goal lines
    std::string fig_name = "figure";

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool saw_name = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "figure") {
            if (toks.size() != 2) return fail(lineno, "expected: figure <name>");
            if (saw_name) return fail(lineno, "duplicate figure declaration");
            fig_name = toks[1];
            saw_name = true;
        } else if (head == "point") {
            if (toks.size() != 4) return fail(lineno, "expected: point <id> <x> <y>");
            if (!valid_identifier(toks[1])) return fail(lineno, "bad point name '" + toks[1] + "'");
            char* end = nullptr;
            double x = std::strtod(toks[2].c_str(), &end);
            if (end == toks[2].c_str() || *end) return fail(lineno, "bad coordinate '" + toks[2] + "'");
            double y = std::strtod(toks[3].c_str(), &end);
            if (end == toks[3].c_str() || *end) return fail(lineno, "bad coordinate '" + toks[3] + "'");
            for (const auto& rp : raw_points)
                if (rp.name == toks[1]) return fail(lineno, "duplicate point name '" + toks[1] + "'");
            raw_points.push_back({toks[1], x, y, lineno});
        } else if (head == "segment" || head == "assume" || head == "goal") {
            deferred.emplace_back(toks, lineno);
        } else {
            return fail(lineno, "unknown declaration '" + head + "'");
        }
    }
    if (raw_points.empty()) return fail(lineno, "figure has no points");

    Figure f;
    f.name = fig_name;
    std::vector<std::string> names;
    for (const auto& rp : raw_points) names.push_back(rp.name);
    f.symbols = Symbols::make_ranked(names);
    f.coords.resize(raw_points.size());
    for (const auto& rp : raw_points) f.coords[f.symbols.id(rp.name)] = {rp.x, rp.y};

    std::set<std::pair<PointId, PointId>> seg_set;
    for (const auto& [toks, ln] : deferred) {
        if (toks[0] == "segment") {
            if (toks.size() != 3) return fail(ln, "expected: segment <id> <id>");
            for (int i = 1; i <= 2; ++i)
                if (!f.symbols.contains(toks[i])) return fail(ln, "unknown point '" + toks[i] + "'");
            PointId a = f.symbols.id(toks[1]), b = f.symbols.id(toks[2]);
            if (a == b) return fail(ln, "segment endpoints must differ");
            if (dist(f.at(a), f.at(b)) <= f.length_tol(kDefaultEps))
                return fail(ln, "zero-length segment " + toks[1] + " " + toks[2]);
            auto pr = std::minmax(a, b);
            if (!seg_set.insert({pr.first, pr.second}).second)
                return fail(ln, "duplicate segment " + toks[1] + " " + toks[2]);
        } else {
            std::vector<std::string> ptoks(toks.begin() + 1, toks.end());
            std::string perr;
            auto p = parse_prop(ptoks, f.symbols, &perr);
            if (!p) return fail(ln, perr);
            if (toks[0] == "assume") {
                if (std::find(f.assumptions.begin(), f.assumptions.end(), *p) == f.assumptions.end())
                    f.assumptions.push_back(*p);
            } else {
                if (std::find(f.goals.begin(), f.goals.end(), *p) == f.goals.end())
                    f.goals.push_back(*p);
            }
        }
    }
    f.segments.assign(seg_set.begin(), seg_set.end());
    return f;
}

std::string serialize_figure(const Figure& f) {
    std::ostringstream os;
    os << "figure " << f.name << "\n";
    char buf[64];
    for (std::size_t i = 0; i < f.coords.size(); ++i) {
        snprintf(buf, sizeof buf, "%.17g %.17g", f.coords[i].x, f.coords[i].y);
        os << "point " << f.symbols.name(static_cast<PointId>(i)) << " " << buf << "\n";
    }
    for (auto [a, b] : f.segments)
        os << "segment " << f.symbols.name(a) << " " << f.symbols.name(b) << "\n";
    for (const auto& p : f.assumptions) os << "assume " << prop_to_string(p, f.symbols) << "\n";
    for (const auto& p : f.goals) os << "goal " << prop_to_string(p, f.symbols) << "\n";
    return os.str();
}

namespace {

// points strictly interior to segment (a,b), ordered by position along it
std::vector<PointId> interior_points(const Figure& f, PointId a, PointId b, double eps) {
    std::vector<std::pair<double, PointId>> on;
    Vec2 d = f.at(b) - f.at(a);
    double len2 = dot(d, d);
    double tol = f.length_tol(eps);
    for (PointId x = 0; x < f.coords.size(); ++x) {
        if (x == a || x == b) continue;
        if (!f.collinear_coords(a, b, x, eps)) continue;
        double t = dot(f.at(x) - f.at(a), d) / len2;
        if (dist(f.at(x), f.at(a)) <= tol || dist(f.at(x), f.at(b)) <= tol) continue;
        if (t <= 0 || t >= 1) continue;
        on.emplace_back(t, x);
    }
    std::sort(on.begin(), on.end());
    std::vector<PointId> out;
    for (auto& [t, x] : on) out.push_back(x);
    return out;
}

}  // namespace

IntrinsicFacts intrinsic_facts(const Figure& f, double eps) {
    IntrinsicFacts out;
    std::set<std::pair<PointId, PointId>> eff;
    std::set<Prop> facts;

    for (auto [a, b] : f.segments) {
        std::vector<PointId> chain;
        chain.push_back(a);
        for (PointId x : interior_points(f, a, b, eps)) chain.push_back(x);
        chain.push_back(b);
        for (std::size_t i = 0; i < chain.size(); ++i)
            for (std::size_t j = i + 1; j < chain.size(); ++j) {
                auto pr = std::minmax(chain[i], chain[j]);
                eff.insert({pr.first, pr.second});
            }
        for (std::size_t i = 0; i < chain.size(); ++i)
            for (std::size_t j = i + 1; j < chain.size(); ++j)
                for (std::size_t k = j + 1; k < chain.size(); ++k) {
                    facts.insert(canonicalize(
                        make_prop(PropKind::Collinear, {chain[i], chain[j], chain[k]})));
                    facts.insert(canonicalize(
                        make_prop(PropKind::Between, {chain[i], chain[j], chain[k]})));
                }
    }
    out.effective_segments.assign(eff.begin(), eff.end());

    for (auto [a, b] : eff)
        facts.insert(canonicalize(make_prop(PropKind::SegmentExists, {a, b})));

    // angles: pairs of rays at a common vertex, arms along effective segments
    std::map<PointId, std::vector<PointId>> rays;
    for (auto [a, b] : eff) {
        rays[a].push_back(b);
        rays[b].push_back(a);
    }
    for (auto& [v, rs] : rays) {
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j) {
                if (f.collinear_coords(rs[i], v, rs[j], eps)) continue;
                facts.insert(canonicalize(make_prop(PropKind::AngleExists, {rs[i], v, rs[j]})));
            }
    }

    // triangles: pairwise connected, non-collinear triples
    std::size_t np = f.coords.size();
    auto connected = [&](PointId x, PointId y) {
        auto pr = std::minmax(x, y);
        return eff.count({pr.first, pr.second}) != 0;
    };
    for (PointId a = 0; a < np; ++a)
        for (PointId b = a + 1; b < np; ++b)
            for (PointId c = b + 1; c < np; ++c) {
                if (!connected(a, b) || !connected(b, c) || !connected(a, c)) continue;
                if (f.collinear_coords(a, b, c, eps)) continue;
                out.triangles.push_back({a, b, c});
                facts.insert(canonicalize(make_prop(PropKind::TriangleExists, {a, b, c})));
            }

    out.facts.assign(facts.begin(), facts.end());
    return out;
}

std::vector<Prop> extract_implicit_facts(const Figure& f, double eps) {
    IntrinsicFacts in = intrinsic_facts(f, eps);
    std::set<Prop> facts;
    double ltol = f.length_tol(eps);
    auto seg_len = [&](std::pair<PointId, PointId> s) { return dist(f.at(s.first), f.at(s.second)); };

    // collinearity / betweenness / midpoints along drawn segments
    for (const Prop& p : in.facts) {
        if (p.kind == PropKind::Collinear || p.kind == PropKind::Between) facts.insert(p);
        if (p.kind == PropKind::Between) {
            PointId a = p.pts[0], m = p.pts[1], b = p.pts[2];
            if (std::fabs(dist(f.at(a), f.at(m)) - dist(f.at(m), f.at(b))) <= ltol)
                facts.insert(canonicalize(make_prop(PropKind::Midpoint, {m, a, b})));
        }
    }

    // segment congruences
    for (std::size_t i = 0; i < in.effective_segments.size(); ++i)
        for (std::size_t j = i + 1; j < in.effective_segments.size(); ++j) {
            auto s = in.effective_segments[i], t = in.effective_segments[j];
            if (std::fabs(seg_len(s) - seg_len(t)) <= ltol)
                facts.insert(canonicalize(
                    make_prop(PropKind::SegCong, {s.first, s.second, t.first, t.second})));
        }

    // parallel / perpendicular between effective segments
    for (std::size_t i = 0; i < in.effective_segments.size(); ++i)
        for (std::size_t j = i + 1; j < in.effective_segments.size(); ++j) {
            auto s = in.effective_segments[i], t = in.effective_segments[j];
            Vec2 ds = f.at(s.second) - f.at(s.first), dt = f.at(t.second) - f.at(t.first);
            double scale = std::hypot(ds.x, ds.y) * std::hypot(dt.x, dt.y);
            if (std::fabs(cross(ds, dt)) <= eps * scale &&
                !f.segments_same_line(s.first, s.second, t.first, t.second, eps))
                facts.insert(canonicalize(
                    make_prop(PropKind::Parallel, {s.first, s.second, t.first, t.second})));
            if (std::fabs(dot(ds, dt)) <= eps * scale)
                facts.insert(canonicalize(
                    make_prop(PropKind::Perpendicular, {s.first, s.second, t.first, t.second})));
        }

    // angle measures for declared angles, kept when close to a whole degree
    double atol = std::max(eps * 90.0, 1e-9);
    for (const Prop& p : in.facts) {
        if (p.kind != PropKind::AngleExists) continue;
        Vec2 u = f.at(p.pts[0]) - f.at(p.pts[1]), v = f.at(p.pts[2]) - f.at(p.pts[1]);
        double deg = std::atan2(std::fabs(cross(u, v)), dot(u, v)) * 180.0 / M_PI;
        double rounded = std::round(deg);
        if (std::fabs(deg - rounded) <= atol && rounded > 0 && rounded < 180)
            facts.insert(canonicalize(make_prop(
                PropKind::AngleMeasure, {p.pts[0], p.pts[1], p.pts[2]}, Rat((long long)rounded))));
    }

    // triangle shapes
    for (auto& t : in.triangles) {
        PointId a = t[0], b = t[1], c = t[2];
        double ab = dist(f.at(a), f.at(b)), bc = dist(f.at(b), f.at(c)), ca = dist(f.at(c), f.at(a));
        bool apex_a = std::fabs(ab - ca) <= ltol;
        bool apex_b = std::fabs(ab - bc) <= ltol;
        bool apex_c = std::fabs(ca - bc) <= ltol;
        if (apex_a) facts.insert(canonicalize(make_prop(PropKind::Isosceles, {a, b, c})));
        if (apex_b) facts.insert(canonicalize(make_prop(PropKind::Isosceles, {b, a, c})));
        if (apex_c) facts.insert(canonicalize(make_prop(PropKind::Isosceles, {c, a, b})));
        if (apex_a && apex_b)
            facts.insert(canonicalize(make_prop(PropKind::Equilateral, {a, b, c})));
        for (auto [x, y, z] : {std::array<PointId, 3>{a, b, c}, {b, c, a}, {c, a, b}}) {
            if (std::fabs(dot(f.at(x) - f.at(y), f.at(z) - f.at(y))) <=
                eps * std::max(1.0, dist(f.at(x), f.at(y)) * dist(f.at(z), f.at(y))))
                facts.insert(canonicalize(make_prop(PropKind::RightTriangle, {x, y, z})));
        }
    }

    // triangle congruence / similarity with explicit correspondences
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto sides = [&](const std::array<PointId, 3>& t) {
        return std::array<double, 3>{dist(f.at(t[0]), f.at(t[1])), dist(f.at(t[1]), f.at(t[2])),
                                     dist(f.at(t[2]), f.at(t[0]))};
    };
    for (std::size_t i = 0; i < in.triangles.size(); ++i)
        for (std::size_t j = i; j < in.triangles.size(); ++j) {
            auto t1 = in.triangles[i];
            auto s1 = sides(t1);
            for (auto& pm : perms) {
                std::array<PointId, 3> t2 = {in.triangles[j][pm[0]], in.triangles[j][pm[1]],
                                             in.triangles[j][pm[2]]};
                auto s2 = sides(t2);
                Prop cong = canonicalize(make_prop(PropKind::TriCong,
                                                   {t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]}));
                if (prop_degenerate(cong)) continue;
                if (std::fabs(s1[0] - s2[0]) <= ltol && std::fabs(s1[1] - s2[1]) <= ltol &&
                    std::fabs(s1[2] - s2[2]) <= ltol) {
                    facts.insert(cong);
                    facts.insert(canonicalize(make_prop(
                        PropKind::TriSim, {t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]})));
                    continue;
                }
                double r = s2[0] / s1[0];
                if (std::fabs(s2[1] - r * s1[1]) <= ltol && std::fabs(s2[2] - r * s1[2]) <= ltol)
                    facts.insert(canonicalize(make_prop(
                        PropKind::TriSim, {t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]})));
            }
        }

    for (const Prop& a : f.assumptions) facts.erase(a);
    std::vector<Prop> out(facts.begin(), facts.end());
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Prop& p) { return prop_degenerate(p); }),
              out.end());
    return out;
}

const char* shape_class_name(ShapeClass c) {
    switch (c) {
        case ShapeClass::Triangle: return "triangle";
        case ShapeClass::IsoscelesTriangle: return "isosceles-triangle";
        case ShapeClass::RightTriangle: return "right-triangle";
        case ShapeClass::EquilateralTriangle: return "equilateral-triangle";
        case ShapeClass::Quadrilateral: return "quadrilateral";
        case ShapeClass::Trapezoid: return "trapezoid";
        case ShapeClass::Parallelogram: return "parallelogram";
        case ShapeClass::Rectangle: return "rectangle";
        case ShapeClass::Rhombus: return "rhombus";
        case ShapeClass::Square: return "square";
    }
    return "?";
}

bool shape_leq(ShapeClass a, ShapeClass b) {
    if (a == b) return true;
    using S = ShapeClass;
    static const std::pair<S, S> covers[] = {
        {S::EquilateralTriangle, S::IsoscelesTriangle},
        {S::IsoscelesTriangle, S::Triangle},
        {S::RightTriangle, S::Triangle},
        {S::Square, S::Rectangle},
        {S::Square, S::Rhombus},
        {S::Rectangle, S::Parallelogram},
        {S::Rhombus, S::Parallelogram},
        {S::Parallelogram, S::Trapezoid},
        {S::Trapezoid, S::Quadrilateral},
    };
    // transitive closure by DFS over cover edges
    std::vector<S> stack{a};
    std::set<S> seen{a};
    while (!stack.empty()) {
        S cur = stack.back();
        stack.pop_back();
        for (auto [lo, hi] : covers)
            if (lo == cur && !seen.count(hi)) {
                if (hi == b) return true;
                seen.insert(hi);
                stack.push_back(hi);
            }
    }
    return false;
}

std::vector<ShapeClass> accepting_classes(const Figure& f, const std::vector<PointId>& shape,
                                          double eps) {
    std::vector<ShapeClass> acc;
    IntrinsicFacts in = intrinsic_facts(f, eps);
    std::set<std::pair<PointId, PointId>> eff(in.effective_segments.begin(),
                                              in.effective_segments.end());
    auto connected = [&](PointId x, PointId y) {
        auto pr = std::minmax(x, y);
        return eff.count({pr.first, pr.second}) != 0;
    };
    double ltol = f.length_tol(eps);

    if (shape.size() == 3) {
        PointId a = shape[0], b = shape[1], c = shape[2];
        if (a == b || b == c || a == c) return acc;
        if (!connected(a, b) || !connected(b, c) || !connected(a, c)) return acc;
        if (f.collinear_coords(a, b, c, eps)) return acc;
        double ab = dist(f.at(a), f.at(b)), bc = dist(f.at(b), f.at(c)), ca = dist(f.at(c), f.at(a));
        bool equi = std::fabs(ab - bc) <= ltol && std::fabs(bc - ca) <= ltol;
        bool iso = std::fabs(ab - bc) <= ltol || std::fabs(bc - ca) <= ltol ||
                   std::fabs(ca - ab) <= ltol;
        bool right = false;
        for (auto [x, y, z] : {std::array<PointId, 3>{a, b, c}, {b, c, a}, {c, a, b}})
            if (std::fabs(dot(f.at(x) - f.at(y), f.at(z) - f.at(y))) <=
                eps * std::max(1.0, dist(f.at(x), f.at(y)) * dist(f.at(z), f.at(y))))
                right = true;
        acc.push_back(ShapeClass::Triangle);
        // right-triangle recognizer rejects isosceles rights so acceptance sets chain
        if (right && !iso) acc.push_back(ShapeClass::RightTriangle);
        if (iso) acc.push_back(ShapeClass::IsoscelesTriangle);
        if (equi) acc.push_back(ShapeClass::EquilateralTriangle);
        return acc;
    }
    if (shape.size() == 4) {
        PointId p0 = shape[0], p1 = shape[1], p2 = shape[2], p3 = shape[3];
        std::set<PointId> uniq(shape.begin(), shape.end());
        if (uniq.size() != 4) return acc;
        if (!connected(p0, p1) || !connected(p1, p2) || !connected(p2, p3) || !connected(p3, p0))
            return acc;
        for (auto [x, y, z] : {std::array<PointId, 3>{p0, p1, p2}, {p1, p2, p3}, {p2, p3, p0}, {p3, p0, p1}})
            if (f.collinear_coords(x, y, z, eps)) return acc;
        // simple polygon: opposite sides must not cross
        auto proper_cross = [&](PointId a, PointId b, PointId c, PointId d) {
            Vec2 r = f.at(b) - f.at(a), s = f.at(d) - f.at(c);
            double den = cross(r, s);
            if (std::fabs(den) < 1e-12) return false;
            double t = cross(f.at(c) - f.at(a), s) / den;
            double u = cross(f.at(c) - f.at(a), r) / den;
            return t > 1e-9 && t < 1 - 1e-9 && u > 1e-9 && u < 1 - 1e-9;
        };
        if (proper_cross(p0, p1, p2, p3) || proper_cross(p1, p2, p3, p0)) return acc;

        auto par = [&](PointId a, PointId b, PointId c, PointId d) {
            Vec2 u = f.at(b) - f.at(a), v = f.at(d) - f.at(c);
            return std::fabs(cross(u, v)) <= eps * std::hypot(u.x, u.y) * std::hypot(v.x, v.y);
        };
        bool par1 = par(p0, p1, p3, p2), par2 = par(p1, p2, p0, p3);
        bool pgram = par1 && par2;
        bool rect = pgram && std::fabs(dot(f.at(p1) - f.at(p0), f.at(p3) - f.at(p0))) <=
                                 eps * std::max(1.0, dist(f.at(p1), f.at(p0)) * dist(f.at(p3), f.at(p0)));
        bool rhom = pgram && std::fabs(dist(f.at(p0), f.at(p1)) - dist(f.at(p1), f.at(p2))) <= ltol;
        acc.push_back(ShapeClass::Quadrilateral);
        if (par1 || par2) acc.push_back(ShapeClass::Trapezoid);
        if (pgram) acc.push_back(ShapeClass::Parallelogram);
        if (rect) acc.push_back(ShapeClass::Rectangle);
        if (rhom) acc.push_back(ShapeClass::Rhombus);
        if (rect && rhom) acc.push_back(ShapeClass::Square);
        return acc;
    }
    return acc;
}

std::optional<ShapeClass> classify_strongest(const Figure& f, const std::vector<PointId>& shape,
                                             double eps) {
    auto acc = accepting_classes(f, shape, eps);
    if (acc.empty()) return std::nullopt;
    // glb of the accepting set
    for (ShapeClass c : acc) {
        bool least = true;
        for (ShapeClass d : acc)
            if (!shape_leq(c, d)) { least = false; break; }
        if (least) return c;
    }
    return acc.back();
}

}  // namespace geo
