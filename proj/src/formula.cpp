#include "tlmp/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "tlmp/errors.hpp"

namespace tlmp {

Formula make_true() { return Formula{}; }

Formula make_pred(std::string name, std::vector<std::string> args) {
  Formula f;
  f.kind = NodeKind::Pred;
  f.pred_name = std::move(name);
  f.pred_args = std::move(args);
  return f;
}

Formula make_pred_cmp(std::string name, std::vector<std::string> args, CmpOp op,
                      double threshold) {
  if (op == CmpOp::None) throw std::invalid_argument("comparison predicate needs an operator");
  Formula f = make_pred(std::move(name), std::move(args));
  f.cmp = op;
  f.threshold = threshold;
  return f;
}

namespace {

Formula unary(NodeKind kind, Formula child) {
  Formula f;
  f.kind = kind;
  f.children.push_back(std::move(child));
  return f;
}

Formula binary(NodeKind kind, Formula lhs, Formula rhs) {
  Formula f;
  f.kind = kind;
  f.children.push_back(std::move(lhs));
  f.children.push_back(std::move(rhs));
  return f;
}

Formula nary(NodeKind kind, std::vector<Formula> children, std::vector<double> weights) {
  if (children.size() < 2)
    throw std::invalid_argument("weighted conjunction/disjunction needs at least 2 operands");
  if (weights.empty()) weights.assign(children.size(), 1.0);
  if (weights.size() != children.size())
    throw std::invalid_argument("one weight per operand required");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
  Formula f;
  f.kind = kind;
  f.children = std::move(children);
  f.weights = std::move(weights);
  return f;
}

}  // namespace

Formula make_not(Formula f) { return unary(NodeKind::Not, std::move(f)); }
Formula make_eventually(Formula f) { return unary(NodeKind::Eventually, std::move(f)); }
Formula make_always(Formula f) { return unary(NodeKind::Always, std::move(f)); }
Formula make_until(Formula l, Formula r) { return binary(NodeKind::Until, std::move(l), std::move(r)); }
Formula make_then(Formula l, Formula r) { return binary(NodeKind::Then, std::move(l), std::move(r)); }
Formula make_implies(Formula l, Formula r) { return binary(NodeKind::Implies, std::move(l), std::move(r)); }

Formula make_and(std::vector<Formula> children, std::vector<double> weights) {
  return nary(NodeKind::And, std::move(children), std::move(weights));
}

Formula make_or(std::vector<Formula> children, std::vector<double> weights) {
  return nary(NodeKind::Or, std::move(children), std::move(weights));
}

void validate(const Formula& f) {
  auto expect_children = [&](size_t n) {
    if (f.children.size() != n)
      throw std::invalid_argument("formula node has wrong arity");
  };
  switch (f.kind) {
    case NodeKind::True:
    case NodeKind::Pred:
      expect_children(0);
      if (f.kind == NodeKind::Pred && f.pred_name.empty())
        throw std::invalid_argument("predicate needs a name");
      break;
    case NodeKind::Not:
    case NodeKind::Eventually:
    case NodeKind::Always:
      expect_children(1);
      break;
    case NodeKind::Until:
    case NodeKind::Then:
    case NodeKind::Implies:
      expect_children(2);
      break;
    case NodeKind::And:
    case NodeKind::Or:
      if (f.children.size() < 2)
        throw std::invalid_argument("weighted conjunction/disjunction needs at least 2 operands");
      if (f.weights.size() != f.children.size())
        throw std::invalid_argument("one weight per operand required");
      for (double w : f.weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
      break;
  }
  if (f.kind != NodeKind::And && f.kind != NodeKind::Or && !f.weights.empty())
    throw std::invalid_argument("weights only allowed on conjunction/disjunction");
  for (const Formula& c : f.children) validate(c);
}

void PredicateRegistry::add(std::string name, int arity, Fn fn) {
  fns_[{std::move(name), arity}] = std::move(fn);
}

const PredicateRegistry::Fn* PredicateRegistry::find(std::string_view name,
                                                     int arity) const {
  auto it = fns_.find({std::string(name), arity});
  return it == fns_.end() ? nullptr : &it->second;
}

double smooth_min(std::span<const double> values, double k1) {
  if (values.empty()) throw std::invalid_argument("smooth_min of empty list");
  if (!(k1 > 0.0)) throw std::invalid_argument("smooth_min needs k1 > 0");
  // shift by the true minimum so the exponentials cannot overflow
  double m = *std::min_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(-k1 * (v - m));
  return m - std::log(sum) / k1;
}

double smooth_max(std::span<const double> values, double k2) {
  if (values.empty()) throw std::invalid_argument("smooth_max of empty list");
  if (!(k2 > 0.0)) throw std::invalid_argument("smooth_max needs k2 > 0");
  double m = *std::max_element(values.begin(), values.end());
  double num = 0.0;
  double den = 0.0;
  for (double v : values) {
    double u = std::exp(k2 * (v - m));
    num += v * u;
    den += u;
  }
  return num / den;
}

namespace {

// Eq.-style weighted scaling: positive conjuncts shrink with the complement
// of their normalized weight, negative ones with the weight itself. Zero maps
// to zero.
double scale_conjunctive(double wbar, double x) {
  if (x > 0.0) return (1.0 - wbar) * x;
  if (x < 0.0) return wbar * x;
  return 0.0;
}

// Dual scaling (negate, aggregate, negate): positive disjuncts scale with
// their normalized weight.
double scale_disjunctive(double wbar, double x) {
  if (x > 0.0) return wbar * x;
  if (x < 0.0) return (1.0 - wbar) * x;
  return 0.0;
}

class Evaluator {
 public:
  Evaluator(const Trace& trace, const PredicateRegistry& registry)
      : trace_(trace), registry_(registry) {}

  bool boolean(const Formula& f) { return eval_bool(f, 0, last()); }

  double exact(const Formula& f, double rho_max) {
    if (!(rho_max > 0.0) || !std::isfinite(rho_max))
      throw std::invalid_argument("rho_max must be positive and finite");
    rho_max_ = rho_max;
    return eval_exact(f, 0, last());
  }

  double smooth(const Formula& f, const SmoothingParams& sp) {
    if (!(sp.k1 > 0.0) || !(sp.k2 > 0.0))
      throw std::invalid_argument("smoothing sharpness must be positive");
    if (!(sp.rho_max > 0.0) || !std::isfinite(sp.rho_max))
      throw std::invalid_argument("rho_max must be positive and finite");
    rho_max_ = sp.rho_max;
    k1_ = sp.k1;
    k2_ = sp.k2;
    return eval_smooth(f, 0, last());
  }

 private:
  int last() const { return trace_.length() - 1; }

  // Per-state margins of one predicate node, computed once.
  const std::vector<double>& margins(const Formula& f) {
    auto it = margin_cache_.find(&f);
    if (it != margin_cache_.end()) return it->second;
    const auto* fn = registry_.find(f.pred_name, static_cast<int>(f.pred_args.size()));
    if (fn == nullptr)
      throw EvalError("unregistered predicate '" + f.pred_name + "' with arity " +
                      std::to_string(f.pred_args.size()));
    std::vector<double> values(trace_.length());
    for (int t = 0; t < trace_.length(); ++t) {
      double raw = (*fn)(trace_.state(t), f.pred_args);
      switch (f.cmp) {
        case CmpOp::None: values[t] = raw; break;
        case CmpOp::Less: values[t] = f.threshold - raw; break;
        case CmpOp::Greater: values[t] = raw - f.threshold; break;
      }
    }
    return margin_cache_.emplace(&f, std::move(values)).first->second;
  }

  bool eval_bool(const Formula& f, int lo, int hi) {
    switch (f.kind) {
      case NodeKind::True:
        return true;
      case NodeKind::Pred:
        return margins(f)[lo] > 0.0;
      case NodeKind::Not:
        return !eval_bool(f.children[0], lo, hi);
      case NodeKind::And:
        for (const Formula& c : f.children)
          if (!eval_bool(c, lo, hi)) return false;
        return true;
      case NodeKind::Or:
        for (const Formula& c : f.children)
          if (eval_bool(c, lo, hi)) return true;
        return false;
      case NodeKind::Always:
        for (int t = lo; t <= hi; ++t)
          if (!eval_bool(f.children[0], t, hi)) return false;
        return true;
      case NodeKind::Eventually:
        for (int t = lo; t <= hi; ++t)
          if (eval_bool(f.children[0], t, hi)) return true;
        return false;
      case NodeKind::Until:
        for (int t = lo; t <= hi; ++t) {
          if (!eval_bool(f.children[1], t, hi)) continue;
          bool held = true;
          for (int u = lo; u < t && held; ++u) held = eval_bool(f.children[0], u, t);
          if (held) return true;
        }
        return false;
      case NodeKind::Then:
        for (int t = lo; t <= hi; ++t) {
          if (!eval_bool(f.children[1], t, hi)) continue;
          for (int u = lo; u < t; ++u)
            if (eval_bool(f.children[0], u, t)) return true;
        }
        return false;
      case NodeKind::Implies:
        return !eval_bool(f.children[0], lo, hi) || eval_bool(f.children[1], lo, hi);
    }
    throw std::logic_error("unknown formula node");
  }

  double eval_exact(const Formula& f, int lo, int hi) {
    switch (f.kind) {
      case NodeKind::True:
        return rho_max_;
      case NodeKind::Pred:
        return margins(f)[lo];
      case NodeKind::Not:
        return -eval_exact(f.children[0], lo, hi);
      case NodeKind::And: {
        double wsum = 0.0;
        for (double w : f.weights) wsum += w;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < f.children.size(); ++i) {
          double v = scale_conjunctive(f.weights[i] / wsum, eval_exact(f.children[i], lo, hi));
          best = std::min(best, v);
        }
        return best;
      }
      case NodeKind::Or: {
        double wsum = 0.0;
        for (double w : f.weights) wsum += w;
        double best = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < f.children.size(); ++i) {
          double v = scale_disjunctive(f.weights[i] / wsum, eval_exact(f.children[i], lo, hi));
          best = std::max(best, v);
        }
        return best;
      }
      case NodeKind::Always: {
        double best = std::numeric_limits<double>::infinity();
        for (int t = lo; t <= hi; ++t)
          best = std::min(best, eval_exact(f.children[0], t, hi));
        return best;
      }
      case NodeKind::Eventually: {
        double best = -std::numeric_limits<double>::infinity();
        for (int t = lo; t <= hi; ++t)
          best = std::max(best, eval_exact(f.children[0], t, hi));
        return best;
      }
      case NodeKind::Until: {
        double best = -std::numeric_limits<double>::infinity();
        for (int t = lo; t <= hi; ++t) {
          double term = eval_exact(f.children[1], t, hi);
          for (int u = lo; u < t; ++u)
            term = std::min(term, eval_exact(f.children[0], u, t));
          best = std::max(best, term);
        }
        return best;
      }
      case NodeKind::Then: {
        // the left operand must score strictly before the split; with no room
        // for it the split contributes the worst possible value
        double best = -std::numeric_limits<double>::infinity();
        for (int t = lo; t <= hi; ++t) {
          double prior = -rho_max_;
          for (int u = lo; u < t; ++u)
            prior = std::max(prior, eval_exact(f.children[0], u, t));
          best = std::max(best, std::min(eval_exact(f.children[1], t, hi), prior));
        }
        return best;
      }
      case NodeKind::Implies:
        return std::max(-eval_exact(f.children[0], lo, hi),
                        eval_exact(f.children[1], lo, hi));
    }
    throw std::logic_error("unknown formula node");
  }

  double eval_smooth(const Formula& f, int lo, int hi) {
    switch (f.kind) {
      case NodeKind::True:
        return rho_max_;
      case NodeKind::Pred:
        return margins(f)[lo];
      case NodeKind::Not:
        return -eval_smooth(f.children[0], lo, hi);
      case NodeKind::And: {
        double wsum = 0.0;
        for (double w : f.weights) wsum += w;
        std::vector<double> scaled(f.children.size());
        for (size_t i = 0; i < f.children.size(); ++i)
          scaled[i] = scale_conjunctive(f.weights[i] / wsum, eval_smooth(f.children[i], lo, hi));
        return smooth_min(scaled, k1_);
      }
      case NodeKind::Or: {
        double wsum = 0.0;
        for (double w : f.weights) wsum += w;
        std::vector<double> scaled(f.children.size());
        for (size_t i = 0; i < f.children.size(); ++i)
          scaled[i] = scale_disjunctive(f.weights[i] / wsum, eval_smooth(f.children[i], lo, hi));
        return smooth_max(scaled, k2_);
      }
      case NodeKind::Always: {
        std::vector<double> values(hi - lo + 1);
        for (int t = lo; t <= hi; ++t) values[t - lo] = eval_smooth(f.children[0], t, hi);
        return smooth_min(values, k1_);
      }
      case NodeKind::Eventually: {
        std::vector<double> values(hi - lo + 1);
        for (int t = lo; t <= hi; ++t) values[t - lo] = eval_smooth(f.children[0], t, hi);
        return smooth_max(values, k2_);
      }
      case NodeKind::Until: {
        std::vector<double> terms;
        terms.reserve(hi - lo + 1);
        std::vector<double> inner;
        for (int t = lo; t <= hi; ++t) {
          inner.clear();
          inner.push_back(eval_smooth(f.children[1], t, hi));
          for (int u = lo; u < t; ++u) inner.push_back(eval_smooth(f.children[0], u, t));
          terms.push_back(smooth_min(inner, k1_));
        }
        return smooth_max(terms, k2_);
      }
      case NodeKind::Then: {
        std::vector<double> terms;
        terms.reserve(hi - lo + 1);
        std::vector<double> prior;
        for (int t = lo; t <= hi; ++t) {
          prior.clear();
          for (int u = lo; u < t; ++u) prior.push_back(eval_smooth(f.children[0], u, t));
          double occurred = prior.empty() ? -rho_max_ : smooth_max(prior, k2_);
          std::vector<double> pair{eval_smooth(f.children[1], t, hi), occurred};
          terms.push_back(smooth_min(pair, k1_));
        }
        return smooth_max(terms, k2_);
      }
      case NodeKind::Implies: {
        std::vector<double> pair{-eval_smooth(f.children[0], lo, hi),
                                 eval_smooth(f.children[1], lo, hi)};
        return smooth_max(pair, k2_);
      }
    }
    throw std::logic_error("unknown formula node");
  }

  const Trace& trace_;
  const PredicateRegistry& registry_;
  double rho_max_ = kDefaultRhoMax;
  double k1_ = 0.0;
  double k2_ = 0.0;
  std::unordered_map<const Formula*, std::vector<double>> margin_cache_;
};

}  // namespace

bool satisfies(const Formula& f, const Trace& trace, const PredicateRegistry& registry) {
  validate(f);
  return Evaluator(trace, registry).boolean(f);
}

double robustness(const Formula& f, const Trace& trace,
                  const PredicateRegistry& registry, double rho_max) {
  validate(f);
  return Evaluator(trace, registry).exact(f, rho_max);
}

double smooth_robustness(const Formula& f, const Trace& trace,
                         const PredicateRegistry& registry, const SmoothingParams& sp) {
  validate(f);
  return Evaluator(trace, registry).smooth(f, sp);
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_node(std::string& out, const Formula& f) {
  switch (f.kind) {
    case NodeKind::True:
      out += "true";
      return;
    case NodeKind::Pred:
      out += f.pred_name;
      if (!f.pred_args.empty()) {
        out += '(';
        for (size_t i = 0; i < f.pred_args.size(); ++i) {
          if (i) out += ',';
          out += f.pred_args[i];
        }
        out += ')';
      }
      if (f.cmp != CmpOp::None) {
        out += f.cmp == CmpOp::Less ? " < " : " > ";
        out += format_double(f.threshold);
      }
      return;
    case NodeKind::Not:
      out += '!';
      print_node(out, f.children[0]);
      return;
    case NodeKind::Eventually:
      out += "F ";
      print_node(out, f.children[0]);
      return;
    case NodeKind::Always:
      out += "G ";
      print_node(out, f.children[0]);
      return;
    case NodeKind::And:
    case NodeKind::Or: {
      bool unit = std::all_of(f.weights.begin(), f.weights.end(),
                              [](double w) { return w == 1.0; });
      const char* op = f.kind == NodeKind::And ? " &&" : " ||";
      out += '(';
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) {
          out += op;
          if (i == 1 && !unit) {
            out += '{';
            for (size_t j = 0; j < f.weights.size(); ++j) {
              if (j) out += ',';
              out += format_double(f.weights[j]);
            }
            out += '}';
          }
          out += ' ';
        }
        print_node(out, f.children[i]);
      }
      out += ')';
      return;
    }
    case NodeKind::Until:
    case NodeKind::Then: {
      out += '(';
      print_node(out, f.children[0]);
      out += f.kind == NodeKind::Until ? " U " : " T ";
      print_node(out, f.children[1]);
      out += ')';
      return;
    }
    case NodeKind::Implies:
      out += '(';
      print_node(out, f.children[0]);
      out += " -> ";
      print_node(out, f.children[1]);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_text(const Formula& f) {
  std::string out;
  print_node(out, f);
  return out;
}

}  // namespace tlmp
