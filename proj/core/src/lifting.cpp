#include "efftree/lifting.hpp"

#include <limits>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "efftree/error.hpp"

namespace efftree {

std::ostream& operator<<(std::ostream& os, const NodeAtom& a) {
  return os << '(' << a.child << ' ' << a.obs << ')';
}

void print_node_test(std::ostream& os, const NodeTest& t) {
  print_test(os, t, [](std::ostream& o, const NodeAtom& a) { o << a; });
}

const char* to_string(Side s) { return s == Side::Alpha ? "alpha" : "beta"; }

namespace {

constexpr std::size_t kNoAssumption = std::numeric_limits<std::size_t>::max();

// One lifting check. The obligation path holds (identity, observation)
// pairs of the node obligations currently being evaluated; revisiting one
// closes the cycle at the fixpoint's extreme value (false for α, true for
// β). A verdict that leaned on such an assumption is only exact at the
// obligation it was made about, so it is cached only there.
class LiftingCheck {
 public:
  LiftingCheck(Side side, const ObsSpec& spec, const Pred& pred,
               const Env& env, const Budget& budget, const CheckOptions& opts)
      : side_(side), spec_(spec), pred_(pred), env_(env), budget_(budget),
        opts_(opts) {}

  Verdict run(const TreeExpr& t, const Obs& o) {
    return visit(t, o, budget_.fuel).verdict;
  }

 private:
  struct Result {
    Verdict verdict;
    std::size_t lowest;  // shallowest path entry assumed, or kNoAssumption
  };

  struct Entry {
    std::vector<std::string> keys;
    Obs obs;
  };

  Verdict closed() const {
    return side_ == Side::Alpha ? Verdict::Refuted : Verdict::Proved;
  }

  Result visit(const TreeExpr& t, const Obs& o, std::uint64_t fuel) {
    Head h = force(env_, t);
    if (h.is_leaf) {
      if (!spec_.leaf_fn(o)) return {closed(), kNoAssumption};
      return {pred_(h.value), kNoAssumption};
    }

    for (const auto& key : h.keys) {
      auto it = memo_.find({key, o});
      if (it != memo_.end()) return {it->second, kNoAssumption};
    }
    if (opts_.cycle_rule && !h.keys.empty()) {
      for (std::size_t d = 0; d < path_.size(); ++d) {
        if (path_[d].obs != o) continue;
        for (const auto& key : h.keys)
          for (const auto& seen : path_[d].keys)
            if (key == seen) {
              note(h, o, closed(), "cycle");
              return {closed(), d};
            }
      }
    }
    if (fuel == 0) {
      note(h, o, Verdict::Unknown, "out of fuel");
      return {Verdict::Unknown, kNoAssumption};
    }

    const std::size_t depth = path_.size();
    path_.push_back({h.keys, o});
    std::size_t lowest = kNoAssumption;
    NodeTest test = spec_.node_fn(h.op, o);
    Verdict v = eval_test(
        test,
        [&](const NodeAtom& a) {
          Result r = visit(h.children.at(a.child), a.obs, fuel - 1);
          lowest = std::min(lowest, r.lowest);
          return r.verdict;
        },
        budget_.index_bound);
    path_.pop_back();

    if (lowest >= depth) {
      lowest = kNoAssumption;
      if (is_definite(v))
        for (const auto& key : h.keys) memo_.emplace(std::make_pair(key, o), v);
    }
    note(h, o, v, "");
    return {v, lowest};
  }

  void note(const Head& h, const Obs& o, Verdict v, const char* why) {
    if (!opts_.trace) return;
    std::ostringstream os;
    os << std::string(2 * path_.size(), ' ') << to_string(side_) << ' ' << o
       << " @ " << h.op;
    if (!h.keys.empty()) os << " [" << h.keys.front() << ']';
    os << " -> " << v;
    if (*why) os << " (" << why << ')';
    opts_.trace(os.str());
  }

  Side side_;
  const ObsSpec& spec_;
  const Pred& pred_;
  const Env& env_;
  Budget budget_;
  const CheckOptions& opts_;
  std::vector<Entry> path_;
  std::map<std::pair<std::string, Obs>, Verdict> memo_;
};

void require_obs(const ObsSpec& spec, const Obs& o) {
  if (spec.accepts && !spec.accepts(o))
    throw Error(ErrorKind::UnknownObservation,
                "observation " + to_string(o) + " is not valid for effect '" +
                    spec.name + "'");
}

}  // namespace

Verdict check_alpha(const ObsSpec& spec, const Obs& o, const Pred& pred,
                    const Env& env, const TreeExpr& t, const Budget& budget,
                    const CheckOptions& opts) {
  require_obs(spec, o);
  return LiftingCheck(Side::Alpha, spec, pred, env, budget, opts).run(t, o);
}

Verdict check_beta(const ObsSpec& spec, const Obs& o, const Pred& pred,
                   const Env& env, const TreeExpr& t, const Budget& budget,
                   const CheckOptions& opts) {
  require_obs(spec, o);
  return LiftingCheck(Side::Beta, spec, pred, env, budget, opts).run(t, o);
}

ComplementingPair::ComplementingPair(ObsSpec spec)
    : spec_(std::move(spec)), beta_spec_(spec_) {
  beta_spec_.node_fn = [node = spec_.node_fn](const Op& k, const Obs& o) {
    return dual_test(node(k, o));
  };
}

ComplementingPair complementing_pair(ObsSpec spec) {
  return ComplementingPair(std::move(spec));
}

Verdict truth_pred(const Value& v) { return v.as_truth(); }

}  // namespace efftree
