#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geo/figure.hpp"
#include "geo/hypergraph.hpp"
#include "geo/prop.hpp"

namespace geo {

/// Proposition pattern: kind plus variable slots; value slot handling for
/// angle-measure / seg-scale patterns.
struct Pat {
    PropKind kind{};
    std::uint8_t nslots = 0;
    std::array<std::int8_t, 6> slots{};
    enum class VMode : std::uint8_t { Any, Fixed, FromPremise } vmode = VMode::Any;
    std::int32_t vnum = 0, vden = 1;  // Fixed value
    std::int8_t vprem = -1;           // FromPremise index
};

enum class GuardKind : std::uint8_t {
    OppositeSide,   // pts a,b vs line u,v
    SameSide,       // pts a,b vs line u,v
    RayInside,      // ray v->m inside angle a-v-b   (args m,a,v,b)
    LinesDistinct,  // segments (a,b) and (c,d) not on one line
    ValuesEqual,    // premise i and j carry equal values
    ValuesSum180,   // premise i value + premise j value == 180
    ScaleReducible, // premise i seg-scale pair has gcd > 1
};

struct Guard {
    GuardKind kind;
    std::array<std::int8_t, 4> vars{};  // variable ids (coordinate guards)
    std::int8_t prem_i = -1, prem_j = -1;
};

enum class ConclCompute : std::uint8_t {
    None,
    ValueAdd,       // value(prem_i) + value(prem_j)
    ValueSub,       // value(prem_i) - value(prem_j)
    Value180Minus,  // 180 - value(prem_i)
    Value180MinusSum,
    ScaleCopy,      // coefficient pair of premise i
    ScaleMul,       // coefficient pair of premise i times arg
    ScaleReduce,    // coefficient pair of premise i divided by its gcd
    ScaleCancel,    // combine premises i,j sharing the right segment
};

struct RuleVariant {
    std::string id;
    RuleFamily family = RuleFamily::Axiom;
    std::vector<Pat> premises;
    Pat concl;
    ConclCompute compute = ConclCompute::None;
    std::int8_t compute_i = 0, compute_j = 1;
    int compute_arg = 0;
    std::vector<Guard> guards;
    int nvars = 0;
    bool needs_figure = false;  // set when any coordinate guard present
};

/// Enabled rule ids (empty set = full catalog) plus algebraic derivation caps.
struct RuleConfig {
    std::set<std::string> enabled;
    int cap_num = 8;
    int cap_den = 8;
    int cap_chain = 3;

    bool is_enabled(const std::string& id) const {
        return enabled.empty() || enabled.count(id) != 0;
    }
    static std::optional<RuleConfig> parse(const std::string& text, std::string* err = nullptr);
    std::string serialize() const;
};

class Catalog {
  public:
    static const Catalog& standard();

    const std::vector<RuleVariant>& variants() const { return variants_; }
    std::vector<std::string> rule_ids() const;
    bool has_rule(const std::string& id) const;

  private:
    std::vector<RuleVariant> variants_;
    friend Catalog build_standard_catalog();
};

/// Fact store interface the matcher runs against.
class FactView {
  public:
    virtual ~FactView() = default;
    virtual int lookup(const Prop& canonical) const = 0;  // -1 when absent
    virtual const std::vector<std::pair<Prop, int>>& by_kind(PropKind k) const = 0;
};

/// Simple owning fact set (used by instantiate and the step checker).
class FactSet : public FactView {
  public:
    int add(const Prop& canonical);
    int lookup(const Prop& canonical) const override;
    const std::vector<std::pair<Prop, int>>& by_kind(PropKind k) const override {
        return by_kind_[static_cast<int>(k)];
    }
    std::size_t size() const { return count_; }

  private:
    std::array<std::vector<std::pair<Prop, int>>, kPropKindCount> by_kind_;
    std::size_t count_ = 0;
};

struct MatchEnv {
    const Figure* figure = nullptr;
    double eps = kDefaultEps;
    int cap_num = 8, cap_den = 8;
};

struct Instance {
    const RuleVariant* variant = nullptr;
    std::vector<int> premise_ids;  // fact ids; vacuous congruence premises omitted
    Prop conclusion;               // canonical
};

/// Enumerates ground instances of one rule variant over the facts. When
/// delta is non-null, only instances using at least one delta fact as the
/// pivot premise are produced (semi-naive rounds dedupe downstream).
/// Returns the number of instances suppressed by coefficient caps.
int for_each_instance(const RuleVariant& v, const FactView& facts, const MatchEnv& env,
                      const std::vector<char>* delta,
                      const std::function<void(Instance&&)>& emit);

/// All ground instances of every enabled variant with the given rule id.
std::vector<Instance> instantiate(const std::string& rule_id, const FactView& facts,
                                  const MatchEnv& env);

}  // namespace geo
