#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geo/prop.hpp"
#include "geo/symbols.hpp"

namespace geo {

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

struct FigureError {
    int line = 0;
    std::string message;
};

/// Immutable plane figure: named points plus segments, with the declared
/// assumption and (optional) goal propositions from the figure file.
class Figure {
  public:
    std::string name;
    Symbols symbols;
    std::vector<Vec2> coords;                           // by PointId
    std::vector<std::pair<PointId, PointId>> segments;  // declared, endpoints sorted
    std::vector<Prop> assumptions;                      // canonical
    std::vector<Prop> goals;                            // canonical, optional

    Vec2 at(PointId p) const { return coords[p]; }
    double diameter() const;
    double length_tol(double eps) const;

    bool opposite_sides(PointId a, PointId b, PointId u, PointId v, double eps) const;
    bool same_side(PointId a, PointId b, PointId u, PointId v, double eps) const;
    bool ray_strictly_inside_angle(PointId m, PointId a, PointId v, PointId b, double eps) const;
    bool collinear_coords(PointId a, PointId b, PointId c, double eps) const;
    bool segments_same_line(PointId a, PointId b, PointId c, PointId d, double eps) const;
};

std::optional<Figure> parse_figure(const std::string& text, FigureError* err = nullptr);
std::string serialize_figure(const Figure& f);

/// Structure derived from coordinates: sub-segment split points, existence
/// facts and collinearity/betweenness. These become the hypergraph's
/// intrinsic nodes.
struct IntrinsicFacts {
    std::vector<std::pair<PointId, PointId>> effective_segments;  // sorted pairs
    std::vector<std::array<PointId, 3>> triangles;                // sorted triples
    std::vector<Prop> facts;  // SegmentExists/AngleExists/TriangleExists/Collinear/Between
};

IntrinsicFacts intrinsic_facts(const Figure& f, double eps);

/// Coordinate-true candidate facts (figure strengthening); goals only, not
/// hypergraph nodes. Assumption facts are removed.
std::vector<Prop> extract_implicit_facts(const Figure& f, double eps);

enum class ShapeClass {
    Triangle,
    IsoscelesTriangle,
    RightTriangle,
    EquilateralTriangle,
    Quadrilateral,
    Trapezoid,
    Parallelogram,
    Rectangle,
    Rhombus,
    Square,
};

const char* shape_class_name(ShapeClass c);

/// Partial order on shape classes; true iff a is at least as strong as b.
bool shape_leq(ShapeClass a, ShapeClass b);

/// Classes whose recognizer accepts the shape, weakest to strongest.
std::vector<ShapeClass> accepting_classes(const Figure& f, const std::vector<PointId>& shape,
                                          double eps);

/// Strongest (glb) class of a declared triangle or quadrilateral; nullopt if
/// the tuple is not a shape of the figure.
std::optional<ShapeClass> classify_strongest(const Figure& f, const std::vector<PointId>& shape,
                                             double eps);

constexpr double kDefaultEps = 1e-6;

}  // namespace geo
