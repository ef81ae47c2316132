#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tlmp/trace.hpp"

namespace tlmp {

enum class NodeKind {
  True,        // boolean constant
  Pred,        // named predicate, optionally "name(args) < c" / "> c"
  Not,
  And,         // n-ary, weighted
  Or,          // n-ary, weighted
  Eventually,  // F
  Always,      // G
  Until,       // U
  Then,        // T: left holds at least once strictly before right holds
  Implies,     // ->
};

enum class CmpOp { None, Less, Greater };

/// Abstract syntax tree of a weighted temporal-logic specification.
/// Immutable by convention; build with the make_* factories or parse_formula.
struct Formula {
  NodeKind kind = NodeKind::True;
  std::vector<Formula> children;
  std::vector<double> weights;  // And/Or only, one positive weight per child

  // Pred payload
  std::string pred_name;
  std::vector<std::string> pred_args;
  CmpOp cmp = CmpOp::None;
  double threshold = 0.0;

  bool operator==(const Formula&) const = default;
};

Formula make_true();
Formula make_pred(std::string name, std::vector<std::string> args = {});
Formula make_pred_cmp(std::string name, std::vector<std::string> args, CmpOp op,
                      double threshold);
Formula make_not(Formula f);
Formula make_and(std::vector<Formula> children, std::vector<double> weights = {});
Formula make_or(std::vector<Formula> children, std::vector<double> weights = {});
Formula make_eventually(Formula f);
Formula make_always(Formula f);
Formula make_until(Formula lhs, Formula rhs);
Formula make_then(Formula lhs, Formula rhs);
Formula make_implies(Formula lhs, Formula rhs);

/// Checks the structural invariants (arities, weight counts, positivity).
/// Throws std::invalid_argument naming the violation.
void validate(const Formula& f);

/// Maps (predicate name, arity) to a robustness function over a state.
/// Positive return value means the predicate holds at that state. For
/// comparison predicates the registered function supplies the raw value f(y)
/// and the formula's threshold turns it into a margin.
class PredicateRegistry {
 public:
  using Fn = std::function<double(const Eigen::VectorXd& state,
                                  const std::vector<std::string>& args)>;

  void add(std::string name, int arity, Fn fn);
  const Fn* find(std::string_view name, int arity) const;

 private:
  std::map<std::pair<std::string, int>, Fn> fns_;
};

inline constexpr double kDefaultRhoMax = 1.0e6;

struct SmoothingParams {
  double k1 = 100.0;       // smooth-min sharpness
  double k2 = 100.0;       // smooth-max sharpness
  double rho_max = kDefaultRhoMax;
};

/// Qualitative semantics over the full trace. Weights are ignored.
bool satisfies(const Formula& f, const Trace& trace,
               const PredicateRegistry& registry);

/// Weighted robustness. Strictly positive implies satisfaction, strictly
/// negative implies violation.
double robustness(const Formula& f, const Trace& trace,
                  const PredicateRegistry& registry,
                  double rho_max = kDefaultRhoMax);

/// Robustness with every min/max replaced by its smooth under-approximation,
/// including inside the weighted conjunction/disjunction aggregators.
double smooth_robustness(const Formula& f, const Trace& trace,
                         const PredicateRegistry& registry,
                         const SmoothingParams& sp);

/// -(1/k1) * log(sum_i exp(-k1*a_i)); never exceeds the true minimum.
double smooth_min(std::span<const double> values, double k1);

/// sum_i a_i*exp(k2*a_i) / sum_i exp(k2*a_i); never exceeds the true maximum.
double smooth_max(std::span<const double> values, double k2);

/// Canonical text form; parse_formula(to_text(f)) reproduces f.
std::string to_text(const Formula& f);

/// Parses the formula grammar:
///
///   formula  := andor ( "->" andor )?
///   andor    := until ( ("&&" weights? until)+ | ("||" weights? until)+ )?
///   until    := unary ( ("U" | "T") unary )*          (left-assoc)
///   unary    := ("!" | "F" | "G") unary | atom
///   atom     := "(" formula ")" | predicate | "true"
///   weights  := "{" weight ("," weight)* "}"          (one per operand)
///   predicate:= name ( "(" arg ("," arg)* ")" )? ( ("<" | ">") number )?
///
/// Weight entries are positive numbers, or names resolved through
/// named_weights when provided. Whitespace-insensitive.
Formula parse_formula(std::string_view text,
                      const std::map<std::string, double>* named_weights = nullptr);

}  // namespace tlmp
