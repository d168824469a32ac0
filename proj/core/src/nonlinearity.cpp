#include "splap/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "splap/quadrature.hpp"

namespace splap {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

/**
 * Cumulative-integral cache: panel breakpoints with prefix integrals, refined
 * by a 24-point Gauss rule inside the active panel.  Built eagerly at
 * construction so evaluation is pure and thread-safe.
 */
struct PrefixCache {
  std::vector<double> breaks;
  std::vector<double> cum; ///< cum[i] = ∫_{breaks[0]}^{breaks[i]}
  QuadratureRule rule = QuadratureRule::gauss(24);

  template <class Fn>
  void build(const Fn& fn, std::vector<double> pts) {
    breaks = std::move(pts);
    cum.assign(breaks.size(), 0.0);
    for (std::size_t i = 1; i < breaks.size(); ++i)
      cum[i] = cum[i - 1] + panel(fn, breaks[i - 1], breaks[i]);
  }

  template <class Fn>
  double panel(const Fn& fn, double a, double b) const {
    double h = b - a, acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      acc += rule.weights[q] * fn(a + h * rule.points[q]);
    return h * acc;
  }

  template <class Fn>
  double eval(const Fn& fn, double x) const {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    std::size_t i = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
    return cum[i] + panel(fn, breaks[i], x);
  }
};

/// Maximize a smooth positive function on [lo, hi] by golden-section search
/// followed by a short parabolic refinement.  Returns the max value.
template <class Fn>
double maximize_on(const Fn& fn, double lo, double hi) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(a)); ++it) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = fn(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = fn(x1);
    }
  }
  double xm = 0.5 * (a + b);
  return std::max({fn(xm), fn(lo), fn(hi)});
}

} // namespace

void ExampleParams::validate(double p, int n) const {
  if (!(r_ex > 0.0)) throw std::invalid_argument("example params: r_ex must be > 0");
  if (!(z > 0.0)) throw std::invalid_argument("example params: z must be > 0");
  double q_sup = p * n / (n - p);
  if (!(q > 1.0) || !(q < q_sup))
    throw std::invalid_argument("example params: q must lie in (1, pn/(n-p))");
}

Nonlinearity example_f(const ExampleParams& params, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("example_f: p must be >= 2");
  if (!(params.r_ex > 0.0)) throw std::invalid_argument("example_f: r_ex must be > 0");
  const double r = params.r_ex;
  const double T = M_PI / (2.0 * r); ///< branch joint |t| = π/(2r)
  const double Tp = std::pow(T, p - 1.0);
  const double C = 1.0 + T * T; ///< tail coefficient 1 + (π/2r)²

  auto inner = [=](double t) { return Tp * std::pow(std::fabs(std::sin(r * t)), p); };
  auto tail = [=](double t) {
    return C * std::pow(std::fabs(t), p - 1.0) / (1.0 + t * t);
  };

  // Both branches must agree at the joint (they do analytically: both give T^{p−1}).
  {
    double a = inner(T), b = tail(T);
    if (std::fabs(a - b) > 1e-12 * (1.0 + std::fabs(a)))
      throw std::runtime_error("example_f: branch mismatch at |t| = pi/(2 r_ex)");
  }

  Nonlinearity nl;
  nl.kind = Nonlinearity::Kind::forcing;
  nl.name = "example_f";
  nl.eval = [=](double t) { return std::fabs(t) <= T ? inner(t) : tail(t); };

  nl.deriv = [=](double t) {
    double at = std::fabs(t);
    if (at <= T) {
      // d/dt T^{p−1}|sin(rt)|^p; on |t| ≤ π/(2r) the sine has the sign of t.
      double s = std::sin(r * t), c = std::cos(r * t);
      return Tp * p * std::pow(std::fabs(s), p - 1.0) * sgn(s) * c * r;
    }
    double tp2 = std::pow(at, p - 2.0);
    return sgn(t) * C * tp2 * ((p - 1.0) * (1.0 + t * t) - 2.0 * t * t) /
           ((1.0 + t * t) * (1.0 + t * t));
  };

  if (p == 2.0) {
    // Closed forms: ∫ T sin²(rs) ds and the logarithmic tail.
    double FT = T * (T / 2.0 - std::sin(2.0 * r * T) / (4.0 * r)); // = T²/2 = π²/(8r²)
    nl.anti = [=](double t) {
      double at = std::fabs(t);
      double F;
      if (at <= T)
        F = T * (at / 2.0 - std::sin(2.0 * r * at) / (4.0 * r));
      else
        F = FT + C * 0.5 * std::log((1.0 + at * at) / (1.0 + T * T));
      return sgn(t) * F;
    };
  } else {
    // Cached panel quadrature: uniform panels inside [0, T], dyadic beyond.
    auto inner_cache = std::make_shared<PrefixCache>();
    {
      std::vector<double> pts;
      for (int i = 0; i <= 32; ++i) pts.push_back(T * i / 32.0);
      inner_cache->build(inner, std::move(pts));
    }
    auto tail_cache = std::make_shared<PrefixCache>();
    {
      std::vector<double> pts{T};
      for (int j = 1; j <= 60; ++j) pts.push_back(T * std::pow(2.0, j));
      tail_cache->build(tail, std::move(pts));
    }
    double FT = inner_cache->cum.back();
    nl.anti = [=](double t) {
      double at = std::fabs(t);
      double F = at <= T ? inner_cache->eval(inner, at) : FT + tail_cache->eval(tail, at);
      return sgn(t) * F;
    };
  }

  // Declared growth constant: the true supremum of f(t)/|t|^{p−1}.  The tail
  // ratio C/(1+t²) is decreasing with value 1 at the joint, so only the inner
  // branch can push the constant above 1.
  auto ratio = [=](double t) { return inner(t) / std::pow(t, p - 1.0); };
  nl.growth_c = std::max(1.0, maximize_on(ratio, 1e-8 * T, T));
  return nl;
}

Nonlinearity example_g(const ExampleParams& params) {
  const double z = params.z, q = params.q;
  if (!(z > 0.0)) throw std::invalid_argument("example_g: z must be > 0");
  if (!(q > 1.0)) throw std::invalid_argument("example_g: q must be > 1");
  const double C = (1.0 + z * z) * (1.0 + std::pow(z, q - 1.0));

  auto inner = [=](double t) { return 1.0 + std::pow(std::fabs(t), q - 1.0); };
  auto tail = [=](double t) { return C / (1.0 + t * t); };
  {
    double a = inner(z), b = tail(z);
    if (std::fabs(a - b) > 1e-12 * (1.0 + std::fabs(a)))
      throw std::runtime_error("example_g: branch mismatch at |t| = z");
  }

  Nonlinearity nl;
  nl.kind = Nonlinearity::Kind::disturbance;
  nl.name = "example_g";
  nl.eval = [=](double t) { return std::fabs(t) <= z ? inner(t) : tail(t); };
  nl.deriv = [=](double t) {
    double at = std::fabs(t);
    if (at <= z) return sgn(t) * (q - 1.0) * std::pow(at, q - 2.0);
    return -2.0 * t * C / ((1.0 + t * t) * (1.0 + t * t));
  };
  const double Gz = z + std::pow(z, q) / q;
  nl.anti = [=](double t) {
    double at = std::fabs(t);
    double G = at <= z ? at + std::pow(at, q) / q
                       : Gz + C * (std::atan(at) - std::atan(z));
    return sgn(t) * G;
  };
  // c_g = 1 is pointwise valid: the outer branch is ≤ 1 + z^{q−1} ≤ 1 + |t|^{q−1}
  // for |t| ≥ z because q > 1.
  nl.growth_c = 1.0;
  nl.growth_q = q;
  return nl;
}

Nonlinearity zero_nonlinearity(Nonlinearity::Kind kind) {
  Nonlinearity nl;
  nl.kind = kind;
  nl.name = "zero";
  nl.eval = [](double) { return 0.0; };
  nl.anti = [](double) { return 0.0; };
  nl.deriv = [](double) { return 0.0; };
  nl.growth_c = 0.0;
  nl.growth_q = 2.0;
  return nl;
}

Nonlinearity power_nonlinearity(double k, Nonlinearity::Kind kind) {
  if (!(k >= 1.0)) throw std::invalid_argument("power nonlinearity: exponent must be >= 1");
  Nonlinearity nl;
  nl.kind = kind;
  nl.name = "power:" + std::to_string(k);
  nl.eval = [k](double t) { return std::pow(std::fabs(t), k - 1.0) * t; };
  nl.anti = [k](double t) { return std::pow(std::fabs(t), k + 1.0) / (k + 1.0); };
  nl.deriv = [k](double t) { return k * std::pow(std::fabs(t), k - 1.0); };
  nl.growth_c = 1.0;
  nl.growth_q = k + 1.0;
  return nl;
}

Nonlinearity nonlinearity_by_name(const std::string& name, const ExampleParams& params,
                                  double p, Nonlinearity::Kind kind) {
  if (name == "example_f") return example_f(params, p);
  if (name == "example_g") return example_g(params);
  if (name == "zero") return zero_nonlinearity(kind);
  if (name.rfind("power:", 0) == 0) {
    double k;
    try {
      k = std::stod(name.substr(6));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad power exponent in nonlinearity name: " + name);
    }
    return power_nonlinearity(k, kind);
  }
  throw std::invalid_argument("unknown nonlinearity: " + name);
}

ConditionReport check_f1(const Nonlinearity& nl, double p) {
  if (nl.kind != Nonlinearity::Kind::forcing)
    throw std::invalid_argument("check_f1 expects a forcing nonlinearity");
  ConditionReport rep;
  std::vector<double> decade_max(8, 0.0);
  for (int k = 1; k <= 8; ++k) {
    double t = std::pow(10.0, -k);
    for (double s : {t, -t}) {
      double ratio = std::fabs(nl.eval(s)) / std::pow(std::fabs(s), p - 1.0);
      rep.sample_t.push_back(s);
      rep.sample_value.push_back(ratio);
      decade_max[k - 1] = std::max(decade_max[k - 1], ratio);
    }
  }
  bool decreasing = true;
  for (int k = 4; k < 8; ++k) // decades 5..8 vs their predecessors
    if (decade_max[k] > decade_max[k - 1] * (1.0 + 1e-12) + 1e-300) decreasing = false;
  rep.passes = decreasing && decade_max[7] < 1e-3;
  rep.value_star = decade_max[7];
  return rep;
}

ConditionReport check_f2(const Nonlinearity& nl, double p) {
  if (nl.kind != Nonlinearity::Kind::forcing)
    throw std::invalid_argument("check_f2 expects a forcing nonlinearity");
  ConditionReport rep;
  std::vector<double> decade_max(8, 0.0);
  for (int k = 1; k <= 8; ++k) {
    double t = std::pow(10.0, k);
    for (double s : {t, -t}) {
      double ratio = std::fabs(nl.eval(s)) / std::pow(std::fabs(s), p - 1.0);
      rep.sample_t.push_back(s);
      rep.sample_value.push_back(ratio);
      decade_max[k - 1] = std::max(decade_max[k - 1], ratio);
    }
  }
  bool decreasing = true;
  for (int k = 4; k < 8; ++k)
    if (decade_max[k] > decade_max[k - 1] * (1.0 + 1e-12) + 1e-300) decreasing = false;
  rep.passes = decreasing && decade_max[7] < 1e-3;
  rep.value_star = decade_max[7];
  return rep;
}

ConditionReport check_f3(const Nonlinearity& nl) {
  if (nl.kind != Nonlinearity::Kind::forcing)
    throw std::invalid_argument("check_f3 expects a forcing nonlinearity");
  ConditionReport rep;
  rep.t_star = 0.0;
  rep.value_star = 0.0; // F(0) = 0 anchors the scan
  rep.sample_t.push_back(0.0);
  rep.sample_value.push_back(0.0);
  for (int i = 0; i < 200; ++i) {
    double t = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
    for (double s : {t, -t}) {
      double F = nl.anti(s);
      rep.sample_t.push_back(s);
      rep.sample_value.push_back(F);
      if (F > rep.value_star) {
        rep.value_star = F;
        rep.t_star = s;
      }
    }
  }
  rep.passes = rep.value_star > 0.0;
  return rep;
}

ConditionReport check_g1(const Nonlinearity& nl) {
  if (nl.kind != Nonlinearity::Kind::disturbance)
    throw std::invalid_argument("check_g1 expects a disturbance nonlinearity");
  ConditionReport rep;
  const double q = nl.growth_q;
  double sup = std::fabs(nl.eval(0.0)); // ratio at t = 0 is |g(0)| / 1
  rep.sample_t.push_back(0.0);
  rep.sample_value.push_back(sup);
  for (int i = 0; i < 241; ++i) {
    double t = std::pow(10.0, -6.0 + 10.0 * i / 240.0);
    for (double s : {t, -t}) {
      double ratio = std::fabs(nl.eval(s)) / (1.0 + std::pow(std::fabs(s), q - 1.0));
      rep.sample_t.push_back(s);
      rep.sample_value.push_back(ratio);
      sup = std::max(sup, ratio);
    }
  }
  rep.value_star = sup;
  rep.passes = std::isfinite(sup) && sup <= nl.growth_c * (1.0 + 1e-9);
  return rep;
}

} // namespace splap
