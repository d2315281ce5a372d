#include "geo/prop.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace geo {

namespace {

struct KindInfo {
    PropKind kind;
    const char* name;
    int arity;
    bool has_value;
};

constexpr KindInfo kKinds[kPropKindCount] = {
    {PropKind::Between, "between", 3, false},
    {PropKind::Collinear, "collinear", 3, false},
    {PropKind::Midpoint, "midpoint", 3, false},
    {PropKind::SegCong, "seg-cong", 4, false},
    {PropKind::SegSum, "seg-sum", 6, false},
    {PropKind::SegScale, "seg-scale", 4, true},
    {PropKind::AngleMeasure, "angle-measure", 3, true},
    {PropKind::AngleCong, "angle-cong", 6, false},
    {PropKind::Parallel, "parallel", 4, false},
    {PropKind::Perpendicular, "perpendicular", 4, false},
    {PropKind::TriCong, "tri-cong", 6, false},
    {PropKind::TriSim, "tri-sim", 6, false},
    {PropKind::Isosceles, "isosceles", 3, false},
    {PropKind::Equilateral, "equilateral", 3, false},
    {PropKind::RightTriangle, "right-triangle", 3, false},
    {PropKind::Supplementary, "supplementary", 6, false},
    {PropKind::TriangleExists, "triangle-exists", 3, false},
    {PropKind::AngleExists, "angle-exists", 3, false},
    {PropKind::SegmentExists, "segment-exists", 2, false},
};

const KindInfo& info(PropKind k) { return kKinds[static_cast<int>(k)]; }

Prop with_pts(const Prop& p, std::initializer_list<int> order) {
    Prop q = p;
    int i = 0;
    for (int idx : order) q.pts[i++] = p.pts[idx];
    return q;
}

void add_pair_swaps(std::vector<Prop>& out, const Prop& base, int a, int b) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        Prop q = out[i];
        std::swap(q.pts[a], q.pts[b]);
        out.push_back(q);
    }
    (void)base;
}

}  // namespace

Symbols Symbols::make_ranked(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    if (names.size() > 250) throw std::runtime_error("too many point names");
    Symbols s;
    s.names_ = std::move(names);
    for (std::size_t i = 0; i < s.names_.size(); ++i)
        s.by_name_[s.names_[i]] = static_cast<PointId>(i);
    return s;
}

std::optional<Rat> parse_rational(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    auto all_digits = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
        std::string a = tok.substr(0, slash), b = tok.substr(slash + 1);
        if (!all_digits(a) || !all_digits(b)) return std::nullopt;
        long long den = std::atoll(b.c_str());
        if (den == 0) return std::nullopt;
        return Rat(std::atoll(a.c_str()), den);
    }
    auto dot = tok.find('.');
    if (dot != std::string::npos) {
        std::string a = tok.substr(0, dot), b = tok.substr(dot + 1);
        if (a.empty() || a == "-") a += "0";
        if (!all_digits(a) || b.empty()) return std::nullopt;
        for (char c : b)
            if (!isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        long long den = 1;
        for (std::size_t i = 0; i < b.size(); ++i) den *= 10;
        long long num = std::atoll(a.c_str()) * den;
        long long frac = std::atoll(b.c_str());
        num += (num < 0 || a[0] == '-') ? -frac : frac;
        return Rat(num, den);
    }
    if (!all_digits(tok)) return std::nullopt;
    return Rat(std::atoll(tok.c_str()));
}

int prop_arity(PropKind k) { return info(k).arity; }
bool prop_has_value(PropKind k) { return info(k).has_value; }
const char* prop_kind_name(PropKind k) { return info(k).name; }

std::optional<PropKind> prop_kind_from_name(const std::string& s) {
    for (const auto& ki : kKinds)
        if (s == ki.name) return ki.kind;
    return std::nullopt;
}

Prop make_prop(PropKind k, std::initializer_list<PointId> pts, Rat value) {
    Prop p;
    p.kind = k;
    p.n = static_cast<std::uint8_t>(pts.size());
    int i = 0;
    for (PointId id : pts) p.pts[i++] = id;
    if (prop_has_value(k)) {
        p.num = static_cast<std::int32_t>(value.num);
        p.den = static_cast<std::int32_t>(value.den);
    }
    return p;
}

std::vector<Prop> prop_writings(const Prop& p) {
    std::vector<Prop> out;
    switch (p.kind) {
        case PropKind::Between:
        case PropKind::Midpoint:
        case PropKind::Isosceles:
        case PropKind::RightTriangle:
        case PropKind::AngleExists:
            // fixed distinguished point, other two swap
            out.push_back(p);
            if (p.kind == PropKind::Between || p.kind == PropKind::AngleExists ||
                p.kind == PropKind::RightTriangle) {
                out.push_back(with_pts(p, {2, 1, 0}));
            } else {
                Prop q = p;
                std::swap(q.pts[1], q.pts[2]);
                out.push_back(q);
            }
            break;
        case PropKind::SegmentExists:
            out.push_back(p);
            out.push_back(with_pts(p, {1, 0}));
            break;
        case PropKind::Collinear:
        case PropKind::Equilateral:
        case PropKind::TriangleExists: {
            static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (auto& pm : perms) out.push_back(with_pts(p, {pm[0], pm[1], pm[2]}));
            break;
        }
        case PropKind::SegCong:
        case PropKind::Parallel:
        case PropKind::Perpendicular:
            out.push_back(p);
            out.push_back(with_pts(p, {2, 3, 0, 1}));  // swap the two segments
            add_pair_swaps(out, p, 0, 1);
            add_pair_swaps(out, p, 2, 3);
            break;
        case PropKind::AngleCong:
        case PropKind::Supplementary:
            out.push_back(p);
            out.push_back(with_pts(p, {3, 4, 5, 0, 1, 2}));  // swap the two angles
            add_pair_swaps(out, p, 0, 2);
            add_pair_swaps(out, p, 3, 5);
            break;
        case PropKind::SegSum:
            out.push_back(p);
            out.push_back(with_pts(p, {2, 3, 0, 1, 4, 5}));  // swap addends
            add_pair_swaps(out, p, 0, 1);
            add_pair_swaps(out, p, 2, 3);
            add_pair_swaps(out, p, 4, 5);
            break;
        case PropKind::SegScale: {
            out.push_back(p);
            Prop q = with_pts(p, {2, 3, 0, 1});  // q*s2 = p*s1
            std::swap(q.num, q.den);
            out.push_back(q);
            add_pair_swaps(out, p, 0, 1);
            add_pair_swaps(out, p, 2, 3);
            break;
        }
        case PropKind::AngleMeasure:
            out.push_back(p);
            out.push_back(with_pts(p, {2, 1, 0}));
            break;
        case PropKind::TriCong:
        case PropKind::TriSim: {
            static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (auto& pm : perms) {
                out.push_back(with_pts(p, {pm[0], pm[1], pm[2], pm[0] + 3, pm[1] + 3, pm[2] + 3}));
                out.push_back(with_pts(p, {pm[0] + 3, pm[1] + 3, pm[2] + 3, pm[0], pm[1], pm[2]}));
            }
            break;
        }
    }
    return out;
}

Prop canonicalize(const Prop& p) {
    auto ws = prop_writings(p);
    return *std::min_element(ws.begin(), ws.end());
}

bool prop_reflexively_true(const Prop& p) {
    switch (p.kind) {
        case PropKind::SegCong:
            return (p.pts[0] == p.pts[2] && p.pts[1] == p.pts[3]) ||
                   (p.pts[0] == p.pts[3] && p.pts[1] == p.pts[2]);
        case PropKind::AngleCong: {
            bool same_vertex = p.pts[1] == p.pts[4];
            bool same_arms = (p.pts[0] == p.pts[3] && p.pts[2] == p.pts[5]) ||
                             (p.pts[0] == p.pts[5] && p.pts[2] == p.pts[3]);
            return same_vertex && same_arms;
        }
        case PropKind::TriCong:
        case PropKind::TriSim:
            return p.pts[0] == p.pts[3] && p.pts[1] == p.pts[4] && p.pts[2] == p.pts[5];
        case PropKind::SegScale: {
            bool same_seg = (p.pts[0] == p.pts[2] && p.pts[1] == p.pts[3]) ||
                            (p.pts[0] == p.pts[3] && p.pts[1] == p.pts[2]);
            return same_seg && p.num == p.den;
        }
        default:
            return false;
    }
}

bool prop_degenerate(const Prop& p) {
    // repeated points where the statement shape forbids them
    auto same_seg = [&](int a, int b, int c, int d) {
        return (p.pts[a] == p.pts[c] && p.pts[b] == p.pts[d]) ||
               (p.pts[a] == p.pts[d] && p.pts[b] == p.pts[c]);
    };
    switch (p.kind) {
        case PropKind::Between:
        case PropKind::Collinear:
        case PropKind::Midpoint:
        case PropKind::Isosceles:
        case PropKind::Equilateral:
        case PropKind::RightTriangle:
        case PropKind::TriangleExists:
        case PropKind::AngleExists:
        case PropKind::AngleMeasure:
            if (p.pts[0] == p.pts[1] || p.pts[1] == p.pts[2] || p.pts[0] == p.pts[2]) return true;
            if (p.kind == PropKind::AngleMeasure && (Rat(p.num, p.den) <= Rat(0) || Rat(p.num, p.den) >= Rat(180)))
                return true;
            return false;
        case PropKind::SegmentExists:
            return p.pts[0] == p.pts[1];
        case PropKind::SegCong:
        case PropKind::Parallel:
        case PropKind::Perpendicular:
            if (p.pts[0] == p.pts[1] || p.pts[2] == p.pts[3]) return true;
            if (p.kind != PropKind::SegCong && same_seg(0, 1, 2, 3)) return true;
            return prop_reflexively_true(p);
        case PropKind::SegScale:
            if (p.pts[0] == p.pts[1] || p.pts[2] == p.pts[3]) return true;
            if (p.num <= 0 || p.den <= 0) return true;
            if (same_seg(0, 1, 2, 3)) return true;  // p*s = q*s is either reflexive or false
            return false;
        case PropKind::SegSum:
            if (p.pts[0] == p.pts[1] || p.pts[2] == p.pts[3] || p.pts[4] == p.pts[5]) return true;
            return same_seg(0, 1, 4, 5) || same_seg(2, 3, 4, 5);
        case PropKind::AngleCong:
        case PropKind::Supplementary: {
            for (int base : {0, 3})
                if (p.pts[base] == p.pts[base + 1] || p.pts[base + 1] == p.pts[base + 2] ||
                    p.pts[base] == p.pts[base + 2])
                    return true;
            if (p.kind == PropKind::AngleCong) return prop_reflexively_true(p);
            return false;
        }
        case PropKind::TriCong:
        case PropKind::TriSim: {
            for (int base : {0, 3}) {
                if (p.pts[base] == p.pts[base + 1] || p.pts[base + 1] == p.pts[base + 2] ||
                    p.pts[base] == p.pts[base + 2])
                    return true;
            }
            return prop_reflexively_true(p);
        }
    }
    return false;
}

PropKind goal_type(const Prop& p) { return p.kind; }

std::string prop_to_string(const Prop& p, const Symbols& sym) {
    std::string s = prop_kind_name(p.kind);
    if (p.kind == PropKind::SegScale) {
        s += " ";
        s += std::to_string(p.num) + "/" + std::to_string(p.den);
    }
    for (int i = 0; i < p.n; ++i) {
        s += " ";
        s += sym.name(p.pts[i]);
    }
    if (p.kind == PropKind::AngleMeasure) {
        s += " ";
        s += Rat(p.num, p.den).str();
    }
    return s;
}

std::vector<std::string> prop_point_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    if (tokens.empty()) return out;
    auto kind = prop_kind_from_name(tokens[0]);
    if (!kind) return out;
    std::size_t begin = 1, end = tokens.size();
    if (*kind == PropKind::SegScale) begin = 2;
    if (*kind == PropKind::AngleMeasure) end = end > 1 ? end - 1 : end;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i) out.push_back(tokens[i]);
    return out;
}

std::optional<Prop> parse_prop(const std::vector<std::string>& tokens, const Symbols& sym,
                               std::string* error) {
    auto fail = [&](const std::string& msg) -> std::optional<Prop> {
        if (error) *error = msg;
        return std::nullopt;
    };
    if (tokens.empty()) return fail("empty proposition");
    auto kind = prop_kind_from_name(tokens[0]);
    if (!kind) return fail("unknown proposition kind '" + tokens[0] + "'");
    Prop p;
    p.kind = *kind;
    std::size_t i = 1;
    if (*kind == PropKind::SegScale) {
        if (tokens.size() < 2) return fail("seg-scale needs a coefficient");
        auto slash = tokens[1].find('/');
        std::string a = slash == std::string::npos ? tokens[1] : tokens[1].substr(0, slash);
        std::string b = slash == std::string::npos ? "1" : tokens[1].substr(slash + 1);
        auto ra = parse_rational(a), rb = parse_rational(b);
        if (!ra || !rb || ra->den != 1 || rb->den != 1 || ra->num <= 0 || rb->num <= 0)
            return fail("bad seg-scale coefficient '" + tokens[1] + "'");
        p.num = static_cast<std::int32_t>(ra->num);
        p.den = static_cast<std::int32_t>(rb->num);
        i = 2;
    }
    int arity = prop_arity(*kind);
    std::size_t val_toks = (*kind == PropKind::AngleMeasure) ? 1 : 0;
    if (tokens.size() != i + arity + val_toks)
        return fail(std::string("wrong arity for '") + tokens[0] + "'");
    p.n = static_cast<std::uint8_t>(arity);
    for (int k = 0; k < arity; ++k, ++i) {
        if (!sym.contains(tokens[i])) return fail("unknown point '" + tokens[i] + "'");
        p.pts[k] = sym.id(tokens[i]);
    }
    if (*kind == PropKind::AngleMeasure) {
        auto v = parse_rational(tokens[i]);
        if (!v || *v <= Rat(0) || *v >= Rat(180)) return fail("bad angle measure '" + tokens[i] + "'");
        p.num = static_cast<std::int32_t>(v->num);
        p.den = static_cast<std::int32_t>(v->den);
    }
    Prop c = canonicalize(p);
    if (prop_degenerate(c)) return fail("degenerate proposition");
    return c;
}

}  // namespace geo
