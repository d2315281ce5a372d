#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geo/rational.hpp"
#include "geo/symbols.hpp"

namespace geo {

enum class PropKind : std::uint8_t {
    Between,         // between A B C          (B between A and C)
    Collinear,       // collinear A B C
    Midpoint,        // midpoint M A C         (M midpoint of AC)
    SegCong,         // seg-cong A B C D       (AB ~= CD)
    SegSum,          // seg-sum A B C D E F    (AB + CD = EF)
    SegScale,        // seg-scale p/q A B C D  (p*AB = q*CD, p,q positive ints, kept unreduced)
    AngleMeasure,    // angle-measure A B C v  (m<ABC = v degrees, v exact rational)
    AngleCong,       // angle-cong A B C D E F
    Parallel,        // parallel A B C D
    Perpendicular,   // perpendicular A B C D
    TriCong,         // tri-cong A B C D E F   (correspondence A<->D, B<->E, C<->F)
    TriSim,          // tri-sim A B C D E F
    Isosceles,       // isosceles X A B        (apex X, base AB)
    Equilateral,     // equilateral A B C
    RightTriangle,   // right-triangle A B C   (right angle at B)
    Supplementary,   // supplementary A B C D E F
    TriangleExists,  // triangle-exists A B C
    AngleExists,     // angle-exists A B C     (vertex B)
    SegmentExists,   // segment-exists A B
};

constexpr int kPropKindCount = 19;

/// Grounded geometric/algebraic fact. Stored canonically (see canonicalize).
/// num/den carry the AngleMeasure value (reduced) or the SegScale coefficient
/// pair (unreduced; p*s1 = q*s2).
struct Prop {
    PropKind kind{PropKind::Between};
    std::uint8_t n = 0;  // number of point args
    std::array<PointId, 6> pts{};
    std::int32_t num = 0;
    std::int32_t den = 1;

    friend auto operator<=>(const Prop&, const Prop&) = default;
};

struct PropHash {
    std::size_t operator()(const Prop& p) const noexcept {
        std::size_t h = static_cast<std::size_t>(p.kind) * 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < p.n; ++i) h = h * 1099511628211ULL + p.pts[i];
        h = h * 1099511628211ULL + static_cast<std::size_t>(p.num);
        h = h * 1099511628211ULL + static_cast<std::size_t>(p.den);
        return h;
    }
};

int prop_arity(PropKind k);
bool prop_has_value(PropKind k);
const char* prop_kind_name(PropKind k);
std::optional<PropKind> prop_kind_from_name(const std::string& s);

Prop make_prop(PropKind k, std::initializer_list<PointId> pts, Rat value = Rat(0));

/// All symmetry-equivalent writings of p (p's orbit), p included.
std::vector<Prop> prop_writings(const Prop& p);

/// Least writing in the orbit; idempotent.
Prop canonicalize(const Prop& p);

/// True for statements that hold vacuously (x ~= x forms); such conclusions
/// are never stored as nodes and such premises need no supporting fact.
bool prop_reflexively_true(const Prop& p);

/// Conclusions that are malformed or content-free and must be suppressed.
bool prop_degenerate(const Prop& p);

/// Fine-grained goal type: the proposition kind.
PropKind goal_type(const Prop& p);

std::string prop_to_string(const Prop& p, const Symbols& sym);

struct PropParseError {
    std::string message;
};

/// Parses the surface grammar, e.g. "seg-cong A B C D". Returns canonical form.
std::optional<Prop> parse_prop(const std::vector<std::string>& tokens, const Symbols& sym,
                               std::string* error = nullptr);

/// Point-name tokens of a prop token list (for symbol collection passes).
std::vector<std::string> prop_point_tokens(const std::vector<std::string>& tokens);

}  // namespace geo
