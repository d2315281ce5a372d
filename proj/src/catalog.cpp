#include "geo/catalog.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace geo {

namespace {

struct RuleBuilder {
    RuleVariant v;
    std::map<std::string, int> vars;

    RuleBuilder(std::string id, RuleFamily fam) {
        v.id = std::move(id);
        v.family = fam;
    }

    int var(const std::string& name) {
        auto it = vars.find(name);
        if (it != vars.end()) return it->second;
        int id = static_cast<int>(vars.size());
        if (id >= 12) throw std::logic_error("too many rule variables");
        vars[name] = id;
        return id;
    }

    Pat parse_pat(const std::string& text) {
        std::istringstream is(text);
        std::vector<std::string> toks;
        std::string t;
        while (is >> t) toks.push_back(t);
        if (toks.empty()) throw std::logic_error("empty pattern");
        auto kind = prop_kind_from_name(toks[0]);
        if (!kind) throw std::logic_error("bad pattern kind " + toks[0]);
        Pat p;
        p.kind = *kind;
        std::size_t i = 1;
        if (*kind == PropKind::SegScale) {
            const std::string& vt = toks[1];
            if (vt == "?") {
                p.vmode = Pat::VMode::Any;
            } else if (vt[0] == '@') {
                p.vmode = Pat::VMode::FromPremise;
                p.vprem = static_cast<std::int8_t>(std::atoi(vt.c_str() + 1));
            } else {
                p.vmode = Pat::VMode::Fixed;
                auto slash = vt.find('/');
                p.vnum = std::atoi(vt.substr(0, slash).c_str());
                p.vden = slash == std::string::npos ? 1 : std::atoi(vt.substr(slash + 1).c_str());
            }
            i = 2;
        }
        std::size_t npts = prop_arity(*kind);
        for (std::size_t k = 0; k < npts; ++k, ++i)
            p.slots[p.nslots++] = static_cast<std::int8_t>(var(toks[i]));
        if (*kind == PropKind::AngleMeasure) {
            const std::string& vt = toks[i];
            if (vt == "?") {
                p.vmode = Pat::VMode::Any;
            } else if (vt[0] == '@') {
                p.vmode = Pat::VMode::FromPremise;
                p.vprem = static_cast<std::int8_t>(std::atoi(vt.c_str() + 1));
            } else {
                auto r = parse_rational(vt);
                if (!r) throw std::logic_error("bad pattern value " + vt);
                p.vmode = Pat::VMode::Fixed;
                p.vnum = static_cast<std::int32_t>(r->num);
                p.vden = static_cast<std::int32_t>(r->den);
            }
        }
        return p;
    }

    RuleBuilder& prem(const std::string& text) {
        v.premises.push_back(parse_pat(text));
        return *this;
    }
    RuleBuilder& concl(const std::string& text) {
        v.concl = parse_pat(text);
        return *this;
    }
    RuleBuilder& compute(ConclCompute c, int i = 0, int j = 1, int arg = 0) {
        v.compute = c;
        v.compute_i = static_cast<std::int8_t>(i);
        v.compute_j = static_cast<std::int8_t>(j);
        v.compute_arg = arg;
        return *this;
    }
    RuleBuilder& guard_pts(GuardKind k, const std::string& a, const std::string& b,
                           const std::string& c, const std::string& d) {
        Guard g;
        g.kind = k;
        g.vars = {static_cast<std::int8_t>(var(a)), static_cast<std::int8_t>(var(b)),
                  static_cast<std::int8_t>(var(c)), static_cast<std::int8_t>(var(d))};
        v.guards.push_back(g);
        v.needs_figure = true;
        return *this;
    }
    RuleBuilder& guard_prem(GuardKind k, int i, int j = -1) {
        Guard g;
        g.kind = k;
        g.prem_i = static_cast<std::int8_t>(i);
        g.prem_j = static_cast<std::int8_t>(j);
        v.guards.push_back(g);
        return *this;
    }
    RuleVariant build() {
        v.nvars = static_cast<int>(vars.size());
        return v;
    }
};

}  // namespace

Catalog build_standard_catalog() {
    Catalog cat;
    auto add = [&](RuleBuilder& b) { cat.variants_.push_back(b.build()); };
    using F = RuleFamily;
    using G = GuardKind;
    using C = ConclCompute;

    // ---- axioms ----
    {
        RuleBuilder b("segment-addition", F::Axiom);
        b.prem("collinear x m y").prem("between x m y").concl("seg-sum x m m y x y");
        add(b);
    }
    {
        RuleBuilder b("angle-addition", F::Axiom);
        b.prem("angle-measure a v m ?")
            .prem("angle-measure m v b ?")
            .prem("angle-exists a v b")
            .guard_pts(G::RayInside, "m", "a", "v", "b")
            .concl("angle-measure a v b @0")
            .compute(C::ValueAdd, 0, 1);
        add(b);
    }
    {
        RuleBuilder b("angle-subtraction", F::Axiom);
        b.prem("angle-measure a v b ?")
            .prem("angle-measure a v m ?")
            .prem("angle-exists m v b")
            .guard_pts(G::RayInside, "m", "a", "v", "b")
            .concl("angle-measure m v b @0")
            .compute(C::ValueSub, 0, 1);
        add(b);
    }
    {
        RuleBuilder b("sss", F::Axiom);
        b.prem("triangle-exists a b c")
            .prem("triangle-exists d e f")
            .prem("seg-cong a b d e")
            .prem("seg-cong b c e f")
            .prem("seg-cong c a f d")
            .concl("tri-cong a b c d e f");
        add(b);
    }
    {
        RuleBuilder b("sas", F::Axiom);
        b.prem("triangle-exists a b c")
            .prem("triangle-exists d e f")
            .prem("seg-cong a b d e")
            .prem("angle-cong a b c d e f")
            .prem("seg-cong b c e f")
            .concl("tri-cong a b c d e f");
        add(b);
    }
    {
        RuleBuilder b("asa", F::Axiom);
        b.prem("triangle-exists a b c")
            .prem("triangle-exists d e f")
            .prem("angle-cong c a b f d e")
            .prem("seg-cong a b d e")
            .prem("angle-cong a b c d e f")
            .concl("tri-cong a b c d e f");
        add(b);
    }
    {
        const char* concls[6] = {"seg-cong a b d e",        "seg-cong b c e f",
                                 "seg-cong c a f d",        "angle-cong b a c e d f",
                                 "angle-cong a b c d e f",  "angle-cong b c a e f d"};
        for (const char* c : concls) {
            RuleBuilder b("cpctc", F::Axiom);
            b.prem("tri-cong a b c d e f").concl(c);
            add(b);
        }
    }
    {
        RuleBuilder b("aa-similarity", F::Axiom);
        b.prem("triangle-exists a b c")
            .prem("triangle-exists d e f")
            .prem("angle-cong b a c e d f")
            .prem("angle-cong a b c d e f")
            .concl("tri-sim a b c d e f");
        add(b);
    }
    {
        RuleBuilder b("linear-pair", F::Axiom);
        b.prem("between a b c")
            .prem("angle-exists a b d")
            .prem("angle-exists d b c")
            .concl("supplementary a b d d b c");
        add(b);
    }

    // ---- definitions ----
    {
        RuleBuilder b("midpoint-def", F::Definition);
        b.prem("midpoint m a b").concl("seg-cong a m m b");
        add(b);
    }
    {
        RuleBuilder b("midpoint-half", F::Definition);
        b.prem("midpoint m a b").concl("seg-scale 2/1 a m a b");
        add(b);
        RuleBuilder b2("midpoint-half", F::Definition);
        b2.prem("midpoint m a b").concl("seg-scale 2/1 m b a b");
        add(b2);
    }
    {
        RuleBuilder b("midpoint-converse", F::Definition);
        b.prem("seg-cong a m m b").prem("between a m b").concl("midpoint m a b");
        add(b);
    }
    {
        RuleBuilder b("isosceles-def", F::Definition);
        b.prem("triangle-exists x a b").prem("seg-cong x a x b").concl("isosceles x a b");
        add(b);
    }
    {
        RuleBuilder b("isosceles-sides", F::Definition);
        b.prem("isosceles x a b").concl("seg-cong x a x b");
        add(b);
    }
    {
        RuleBuilder b("equilateral-def", F::Definition);
        b.prem("triangle-exists a b c")
            .prem("seg-cong a b b c")
            .prem("seg-cong b c c a")
            .concl("equilateral a b c");
        add(b);
    }
    {
        RuleBuilder b("equilateral-sides", F::Definition);
        b.prem("equilateral a b c").concl("seg-cong a b b c");
        add(b);
    }
    {
        RuleBuilder b("right-triangle-def", F::Definition);
        b.prem("angle-measure a b c 90").prem("triangle-exists a b c").concl("right-triangle a b c");
        add(b);
    }
    {
        RuleBuilder b("right-triangle-measure", F::Definition);
        b.prem("right-triangle a b c").prem("angle-exists a b c").concl("angle-measure a b c 90");
        add(b);
    }
    {
        RuleBuilder b("perp-from-right-angle", F::Definition);
        b.prem("angle-measure a b c 90").concl("perpendicular b a b c");
        add(b);
    }
    {
        RuleBuilder b("right-angle-from-perp", F::Definition);
        b.prem("perpendicular b a b c").prem("angle-exists a b c").concl("angle-measure a b c 90");
        add(b);
    }
    {
        RuleBuilder b("same-ray-angle", F::Definition);
        b.prem("between x m y")
            .prem("angle-exists m y w")
            .prem("angle-exists x y w")
            .concl("angle-cong m y w x y w");
        add(b);
    }

    // ---- theorems ----
    {
        RuleBuilder b("vertical-angles", F::Theorem);
        b.prem("between a m c")
            .prem("between b m d")
            .prem("angle-exists a m b")
            .prem("angle-exists c m d")
            .concl("angle-cong a m b c m d");
        add(b);
    }
    {
        RuleBuilder b("base-angles", F::Theorem);
        b.prem("triangle-exists x a b").prem("seg-cong x a x b").concl("angle-cong x a b x b a");
        add(b);
    }
    {
        RuleBuilder b("base-angles-converse", F::Theorem);
        b.prem("triangle-exists x a b").prem("angle-cong x a b x b a").concl("seg-cong x a x b");
        add(b);
    }
    {
        RuleBuilder b("triangle-angle-sum", F::Theorem);
        b.prem("triangle-exists a b c")
            .prem("angle-measure b a c ?")
            .prem("angle-measure a b c ?")
            .concl("angle-measure b c a @0")
            .compute(C::Value180MinusSum, 1, 2);
        add(b);
    }
    {
        RuleBuilder b("alt-interior-angles", F::Theorem);
        b.prem("parallel u a v b")
            .prem("segment-exists u v")
            .prem("angle-exists a u v")
            .prem("angle-exists b v u")
            .guard_pts(G::OppositeSide, "a", "b", "u", "v")
            .concl("angle-cong a u v b v u");
        add(b);
    }
    {
        RuleBuilder b("alt-interior-converse", F::Theorem);
        b.prem("angle-cong a u v b v u")
            .prem("segment-exists u a")
            .prem("segment-exists v b")
            .guard_pts(G::OppositeSide, "a", "b", "u", "v")
            .guard_pts(G::LinesDistinct, "u", "a", "v", "b")
            .concl("parallel u a v b");
        add(b);
    }
    {
        RuleBuilder b("co-interior-angles", F::Theorem);
        b.prem("parallel u a v b")
            .prem("segment-exists u v")
            .prem("angle-exists a u v")
            .prem("angle-exists b v u")
            .guard_pts(G::SameSide, "a", "b", "u", "v")
            .concl("supplementary a u v b v u");
        add(b);
    }
    {
        RuleBuilder b("co-interior-converse", F::Theorem);
        b.prem("supplementary a u v b v u")
            .prem("segment-exists u a")
            .prem("segment-exists v b")
            .guard_pts(G::SameSide, "a", "b", "u", "v")
            .guard_pts(G::LinesDistinct, "u", "a", "v", "b")
            .concl("parallel u a v b");
        add(b);
    }
    {
        RuleBuilder b("corresponding-angles", F::Theorem);
        b.prem("parallel u a v b")
            .prem("between w u v")
            .prem("angle-exists a u w")
            .prem("angle-exists b v u")
            .guard_pts(G::SameSide, "a", "b", "u", "v")
            .concl("angle-cong a u w b v u");
        add(b);
    }
    {
        RuleBuilder b("corresponding-converse", F::Theorem);
        b.prem("angle-cong a u w b v u")
            .prem("between w u v")
            .prem("segment-exists u a")
            .prem("segment-exists v b")
            .guard_pts(G::SameSide, "a", "b", "u", "v")
            .guard_pts(G::LinesDistinct, "u", "a", "v", "b")
            .concl("parallel u a v b");
        add(b);
    }
    {
        RuleBuilder b("perpendicular-transfer", F::Theorem);
        b.prem("perpendicular p q r s").prem("parallel r s t u").concl("perpendicular p q t u");
        add(b);
    }
    {
        RuleBuilder b("parallel-transitivity", F::Theorem);
        b.prem("parallel p q r s")
            .prem("parallel r s t u")
            .guard_pts(G::LinesDistinct, "p", "q", "t", "u")
            .concl("parallel p q t u");
        add(b);
    }
    {
        RuleBuilder b("congruent-supplements", F::Theorem);
        b.prem("supplementary a b c d e f")
            .prem("supplementary g h i d e f")
            .concl("angle-cong a b c g h i");
        add(b);
    }
    {
        RuleBuilder b("median-half-converse", F::Theorem);
        b.prem("between b m d")
            .prem("triangle-exists b c d")
            .prem("seg-cong m b m c")
            .prem("seg-cong m c m d")
            .concl("angle-measure b c d 90");
        add(b);
    }

    // ---- algebraic ----
    {
        RuleBuilder b("seg-cong-transitivity", F::Algebraic);
        b.prem("seg-cong a b c d").prem("seg-cong c d e f").concl("seg-cong a b e f");
        add(b);
    }
    {
        RuleBuilder b("angle-cong-transitivity", F::Algebraic);
        b.prem("angle-cong a b c d e f").prem("angle-cong d e f g h i").concl("angle-cong a b c g h i");
        add(b);
    }
    {
        RuleBuilder b("tri-cong-transitivity", F::Algebraic);
        b.prem("tri-cong a b c d e f").prem("tri-cong d e f g h i").concl("tri-cong a b c g h i");
        add(b);
    }
    {
        RuleBuilder b("tri-sim-transitivity", F::Algebraic);
        b.prem("tri-sim a b c d e f").prem("tri-sim d e f g h i").concl("tri-sim a b c g h i");
        add(b);
    }
    {
        RuleBuilder b("measure-transfer", F::Algebraic);
        b.prem("angle-cong a b c d e f").prem("angle-measure a b c ?").concl("angle-measure d e f @1");
        add(b);
    }
    {
        RuleBuilder b("measure-to-cong", F::Algebraic);
        b.prem("angle-measure a b c ?")
            .prem("angle-measure d e f ?")
            .guard_prem(G::ValuesEqual, 0, 1)
            .concl("angle-cong a b c d e f");
        add(b);
    }
    {
        RuleBuilder b("supplementary-measure", F::Algebraic);
        b.prem("supplementary a b c d e f")
            .prem("angle-measure a b c ?")
            .concl("angle-measure d e f @0")
            .compute(C::Value180Minus, 1);
        add(b);
    }
    {
        RuleBuilder b("supplementary-transfer", F::Algebraic);
        b.prem("supplementary a b c d e f")
            .prem("angle-cong d e f g h i")
            .concl("supplementary a b c g h i");
        add(b);
    }
    {
        RuleBuilder b("measures-supplementary", F::Algebraic);
        b.prem("angle-measure a b c ?")
            .prem("angle-measure d e f ?")
            .guard_prem(G::ValuesSum180, 0, 1)
            .concl("supplementary a b c d e f");
        add(b);
    }
    {
        RuleBuilder b("sum-substitution", F::Algebraic);
        b.prem("seg-sum a b c d e f").prem("seg-cong a b g h").concl("seg-sum g h c d e f");
        add(b);
        RuleBuilder b2("sum-substitution", F::Algebraic);
        b2.prem("seg-sum a b c d e f").prem("seg-cong e f g h").concl("seg-sum a b c d g h");
        add(b2);
    }
    {
        RuleBuilder b("sum-to-scale", F::Algebraic);
        b.prem("seg-sum a b c d e f").prem("seg-cong a b c d").concl("seg-scale 2/1 a b e f");
        add(b);
    }
    for (int m = 2; m <= 8; ++m) {
        RuleBuilder b("scale-multiply", F::Algebraic);
        b.prem("seg-scale ? a b c d")
            .concl("seg-scale @0 a b c d")
            .compute(C::ScaleMul, 0, 1, m);
        add(b);
    }
    {
        RuleBuilder b("scale-reduce", F::Algebraic);
        b.prem("seg-scale ? a b c d")
            .guard_prem(G::ScaleReducible, 0)
            .concl("seg-scale @0 a b c d")
            .compute(C::ScaleReduce, 0);
        add(b);
    }
    {
        RuleBuilder b("scale-to-cong", F::Algebraic);
        b.prem("seg-scale ? a b c d")
            .guard_prem(G::ValuesEqual, 0, 0)
            .concl("seg-cong a b c d");
        add(b);
    }
    {
        RuleBuilder b("scale-substitution", F::Algebraic);
        b.prem("seg-scale ? a b c d").prem("seg-cong c d e f").concl("seg-scale @0 a b e f");
        add(b);
        RuleBuilder b2("scale-substitution", F::Algebraic);
        b2.prem("seg-scale ? a b c d").prem("seg-cong a b e f").concl("seg-scale @0 e f c d");
        add(b2);
    }

    return cat;
}

const Catalog& Catalog::standard() {
    static const Catalog cat = build_standard_catalog();
    return cat;
}

std::vector<std::string> Catalog::rule_ids() const {
    std::vector<std::string> ids;
    for (const auto& v : variants_) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

bool Catalog::has_rule(const std::string& id) const {
    for (const auto& v : variants_)
        if (v.id == id) return true;
    return false;
}

std::optional<RuleConfig> RuleConfig::parse(const std::string& text, std::string* err) {
    RuleConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) {
            if (t[0] == '#') break;
            toks.push_back(t);
        }
        if (toks.empty()) continue;
        if (toks[0] == "caps") {
            if (toks.size() != 4) {
                if (err) *err = "line " + std::to_string(lineno) + ": expected caps <num> <den> <chain>";
                return std::nullopt;
            }
            cfg.cap_num = std::atoi(toks[1].c_str());
            cfg.cap_den = std::atoi(toks[2].c_str());
            cfg.cap_chain = std::atoi(toks[3].c_str());
            if (cfg.cap_num <= 0 || cfg.cap_den <= 0 || cfg.cap_chain <= 0) {
                if (err) *err = "line " + std::to_string(lineno) + ": caps must be positive";
                return std::nullopt;
            }
        } else if (toks.size() == 1) {
            if (!Catalog::standard().has_rule(toks[0])) {
                if (err) *err = "line " + std::to_string(lineno) + ": unknown rule id '" + toks[0] + "'";
                return std::nullopt;
            }
            cfg.enabled.insert(toks[0]);
        } else {
            if (err) *err = "line " + std::to_string(lineno) + ": expected one rule id per line";
            return std::nullopt;
        }
    }
    return cfg;
}

std::string RuleConfig::serialize() const {
    std::ostringstream os;
    os << "caps " << cap_num << " " << cap_den << " " << cap_chain << "\n";
    for (const auto& id : enabled) os << id << "\n";
    return os.str();
}

int FactSet::add(const Prop& p) {
    int found = lookup(p);
    if (found >= 0) return found;
    int id = static_cast<int>(count_++);
    by_kind_[static_cast<int>(p.kind)].emplace_back(p, id);
    return id;
}

int FactSet::lookup(const Prop& p) const {
    for (const auto& [q, id] : by_kind_[static_cast<int>(p.kind)])
        if (q == p) return id;
    return -1;
}

namespace {

constexpr std::int8_t kUnbound = -1;

struct Matcher {
    const RuleVariant& v;
    const FactView& facts;
    const MatchEnv& env;
    const std::vector<char>* delta;
    const std::function<void(Instance&&)>& emit;
    int pivot;  // premise index that must use a delta fact, or -1

    std::array<PointId, 12> bind{};
    std::array<bool, 12> bound{};
    std::vector<int> premise_ids;
    std::vector<Prop> premise_insts;  // matched writing, pattern orientation
    int capped = 0;

    Matcher(const RuleVariant& v_, const FactView& f_, const MatchEnv& e_,
            const std::vector<char>* d_, int pivot_, const std::function<void(Instance&&)>& emit_)
        : v(v_), facts(f_), env(e_), delta(d_), emit(emit_), pivot(pivot_) {
        premise_ids.resize(v.premises.size());
        premise_insts.resize(v.premises.size());
    }

    bool pat_fully_bound(const Pat& p) const {
        for (int i = 0; i < p.nslots; ++i)
            if (!bound[p.slots[i]]) return false;
        return true;
    }

    Prop substitute(const Pat& p) const {
        Prop q;
        q.kind = p.kind;
        q.n = p.nslots;
        for (int i = 0; i < p.nslots; ++i) q.pts[i] = bind[p.slots[i]];
        if (p.vmode == Pat::VMode::Fixed) {
            q.num = p.vnum;
            q.den = p.vden;
        } else if (p.vmode == Pat::VMode::FromPremise) {
            q.num = premise_insts[p.vprem].num;
            q.den = premise_insts[p.vprem].den;
        }
        return q;
    }

    // try to bind pattern p against a concrete writing w
    bool try_bind(const Pat& p, const Prop& w, std::vector<int>& newly) {
        if (p.vmode == Pat::VMode::Fixed && (w.num != p.vnum || w.den != p.vden)) return false;
        for (int i = 0; i < p.nslots; ++i) {
            std::int8_t var = p.slots[i];
            if (bound[var]) {
                if (bind[var] != w.pts[i]) {
                    for (int u : newly) bound[u] = false;
                    return false;
                }
            } else {
                bound[var] = true;
                bind[var] = w.pts[i];
                newly.push_back(var);
            }
        }
        return true;
    }

    bool run_guards() {
        for (const Guard& g : v.guards) {
            switch (g.kind) {
                case GuardKind::OppositeSide:
                    if (!env.figure) return false;
                    if (!env.figure->opposite_sides(bind[g.vars[0]], bind[g.vars[1]],
                                                    bind[g.vars[2]], bind[g.vars[3]], env.eps))
                        return false;
                    break;
                case GuardKind::SameSide:
                    if (!env.figure) return false;
                    if (!env.figure->same_side(bind[g.vars[0]], bind[g.vars[1]], bind[g.vars[2]],
                                               bind[g.vars[3]], env.eps))
                        return false;
                    break;
                case GuardKind::RayInside:
                    if (!env.figure) return false;
                    if (!env.figure->ray_strictly_inside_angle(bind[g.vars[0]], bind[g.vars[1]],
                                                               bind[g.vars[2]], bind[g.vars[3]],
                                                               env.eps))
                        return false;
                    break;
                case GuardKind::LinesDistinct:
                    if (!env.figure) return false;
                    if (env.figure->segments_same_line(bind[g.vars[0]], bind[g.vars[1]],
                                                       bind[g.vars[2]], bind[g.vars[3]], env.eps))
                        return false;
                    break;
                case GuardKind::ValuesEqual: {
                    const Prop &a = premise_insts[g.prem_i], &b = premise_insts[g.prem_j];
                    if (g.prem_i == g.prem_j) {
                        if (a.num != a.den) return false;  // balanced seg-scale
                    } else if (Rat(a.num, a.den) != Rat(b.num, b.den)) {
                        return false;
                    }
                    break;
                }
                case GuardKind::ValuesSum180: {
                    const Prop &a = premise_insts[g.prem_i], &b = premise_insts[g.prem_j];
                    if (Rat(a.num, a.den) + Rat(b.num, b.den) != Rat(180)) return false;
                    break;
                }
                case GuardKind::ScaleReducible: {
                    const Prop& a = premise_insts[g.prem_i];
                    if (std::gcd(a.num, a.den) <= 1) return false;
                    break;
                }
            }
        }
        return true;
    }

    std::optional<Prop> conclude() {
        Prop c = substitute(v.concl);
        auto coeff = [&](int i) {
            return std::pair<long long, long long>(premise_insts[i].num, premise_insts[i].den);
        };
        switch (v.compute) {
            case ConclCompute::None:
                break;
            case ConclCompute::ValueAdd:
            case ConclCompute::ValueSub:
            case ConclCompute::Value180Minus:
            case ConclCompute::Value180MinusSum: {
                Rat a(premise_insts[v.compute_i].num, premise_insts[v.compute_i].den);
                Rat bq(premise_insts[v.compute_j].num, premise_insts[v.compute_j].den);
                Rat r;
                if (v.compute == ConclCompute::ValueAdd) r = a + bq;
                else if (v.compute == ConclCompute::ValueSub) r = a - bq;
                else if (v.compute == ConclCompute::Value180Minus) r = Rat(180) - a;
                else r = Rat(180) - a - bq;
                if (r <= Rat(0) || r >= Rat(180)) return std::nullopt;
                c.num = static_cast<std::int32_t>(r.num);
                c.den = static_cast<std::int32_t>(r.den);
                break;
            }
            case ConclCompute::ScaleCopy: {
                auto [p, q] = coeff(v.compute_i);
                c.num = static_cast<std::int32_t>(p);
                c.den = static_cast<std::int32_t>(q);
                break;
            }
            case ConclCompute::ScaleMul: {
                auto [p, q] = coeff(v.compute_i);
                long long np = p * v.compute_arg, nq = q * v.compute_arg;
                if (np > env.cap_num || nq > env.cap_den) {
                    ++capped;
                    return std::nullopt;
                }
                c.num = static_cast<std::int32_t>(np);
                c.den = static_cast<std::int32_t>(nq);
                break;
            }
            case ConclCompute::ScaleReduce: {
                auto [p, q] = coeff(v.compute_i);
                long long g = std::gcd(p, q);
                c.num = static_cast<std::int32_t>(p / g);
                c.den = static_cast<std::int32_t>(q / g);
                break;
            }
            case ConclCompute::ScaleCancel: {
                // p1*s1 = q1*t and p2*s2 = q2*t  =>  (p1*q2)*s1 = (p2*q1)*s2
                auto [p1, q1] = coeff(v.compute_i);
                auto [p2, q2] = coeff(v.compute_j);
                long long P = p1 * q2, Q = p2 * q1;
                long long g = std::gcd(P, Q);
                if (P == Q) {
                    c.kind = PropKind::SegCong;
                    c.num = 0;
                    c.den = 1;
                } else {
                    c.kind = PropKind::SegScale;
                    if (P / g > env.cap_num || Q / g > env.cap_den) {
                        ++capped;
                        return std::nullopt;
                    }
                    c.num = static_cast<std::int32_t>(P / g);
                    c.den = static_cast<std::int32_t>(Q / g);
                }
                break;
            }
        }
        return c;
    }

    void finish() {
        if (!run_guards()) return;
        auto c = conclude();
        if (!c) return;
        Prop canon = canonicalize(*c);
        if (prop_reflexively_true(canon) || prop_degenerate(canon)) return;
        for (const Prop& pi : premise_insts)
            if (canonicalize(pi) == canon) return;  // no self-loop edges
        Instance inst;
        inst.variant = &v;
        inst.conclusion = canon;
        for (std::size_t i = 0; i < premise_ids.size(); ++i)
            if (premise_ids[i] >= 0) inst.premise_ids.push_back(premise_ids[i]);
        std::sort(inst.premise_ids.begin(), inst.premise_ids.end());
        inst.premise_ids.erase(std::unique(inst.premise_ids.begin(), inst.premise_ids.end()),
                               inst.premise_ids.end());
        if (inst.premise_ids.empty()) return;
        emit(std::move(inst));
    }

    void match_premise(std::size_t idx) {
        if (idx == v.premises.size()) {
            finish();
            return;
        }
        const Pat& p = v.premises[idx];
        bool need_delta = (pivot == static_cast<int>(idx)) && delta != nullptr;

        // fully bound premise with a determined value: hash lookup, or a
        // vacuously-true congruence (common side / common angle)
        bool value_known = !prop_has_value(p.kind) || p.vmode != Pat::VMode::Any;
        if (pat_fully_bound(p) && value_known) {
            Prop inst = substitute(p);
            Prop canon = canonicalize(inst);
            if ((p.kind == PropKind::SegCong || p.kind == PropKind::AngleCong) &&
                prop_reflexively_true(canon)) {
                if (need_delta) return;  // vacuous premises never carry new info
                premise_ids[idx] = -1;
                premise_insts[idx] = inst;
                match_premise(idx + 1);
                return;
            }
            if (prop_degenerate(canon)) return;
            int id = facts.lookup(canon);
            if (id < 0) return;
            if (need_delta && !(*delta)[id]) return;
            premise_ids[idx] = id;
            premise_insts[idx] = inst;
            match_premise(idx + 1);
            return;
        }

        for (const auto& [fact, id] : facts.by_kind(p.kind)) {
            if (need_delta && !(*delta)[id]) continue;
            for (const Prop& w : prop_writings(fact)) {
                std::vector<int> newly;
                if (!try_bind(p, w, newly)) continue;
                premise_ids[idx] = id;
                premise_insts[idx] = w;
                match_premise(idx + 1);
                for (int u : newly) bound[u] = false;
            }
        }
    }
};

}  // namespace

int for_each_instance(const RuleVariant& v, const FactView& facts, const MatchEnv& env,
                      const std::vector<char>* delta,
                      const std::function<void(Instance&&)>& emit) {
    int capped = 0;
    if (delta) {
        for (std::size_t pivot = 0; pivot < v.premises.size(); ++pivot) {
            Matcher m(v, facts, env, delta, static_cast<int>(pivot), emit);
            m.match_premise(0);
            capped += m.capped;
        }
    } else {
        Matcher m(v, facts, env, nullptr, -1, emit);
        m.match_premise(0);
        capped += m.capped;
    }
    return capped;
}

std::vector<Instance> instantiate(const std::string& rule_id, const FactView& facts,
                                  const MatchEnv& env) {
    std::vector<Instance> out;
    for (const RuleVariant& v : Catalog::standard().variants()) {
        if (v.id != rule_id) continue;
        for_each_instance(v, facts, env, nullptr,
                          [&](Instance&& inst) { out.push_back(std::move(inst)); });
    }
    // dedupe by (premises, conclusion)
    std::sort(out.begin(), out.end(), [](const Instance& a, const Instance& b) {
        if (a.premise_ids != b.premise_ids) return a.premise_ids < b.premise_ids;
        return a.conclusion < b.conclusion;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Instance& a, const Instance& b) {
                              return a.premise_ids == b.premise_ids && a.conclusion == b.conclusion;
                          }),
              out.end());
    return out;
}

}  // namespace geo
