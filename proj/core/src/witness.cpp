#include "schurdil/witness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <cstdlib>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>

namespace schurdil {

namespace {

constexpr double kArmijo = 1e-4;
constexpr std::size_t kMemory = 10;
constexpr double kMinStep = 1e-14;
constexpr double kMaxStep = 1e3;
// Once the target is met, iterations continue down to this floor (or until
// no further decrease is possible) so certificates carry tight residuals.
constexpr double kPolishFloor = 1e-15;
// Squared Riemannian gradient norm below which a restart is stationary.
constexpr double kStationary = 1e-28;

std::mt19937_64 seeded_rng(std::uint64_t seed, std::size_t d, std::size_t restart,
                           std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(restart),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

ComplexMatrix haar_like_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto s = static_cast<Eigen::Index>(d);
  ComplexMatrix g(s, s);
  for (Eigen::Index c = 0; c < s; ++c) {
    for (Eigen::Index r = 0; r < s; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return unitary_polar_factor(g);
}

struct RestartOutcome {
  UnitaryWitness witness;
  bool success = false;
};

// Shared line-search driver.  `Point` is the optimization variable; the
// callbacks evaluate f (optionally with gradient), take a step of size eta
// along the negative gradient and measure the squared gradient norm.
template <typename Point, typename Gradient>
Point descend(Point x, const SearchConfig& cfg,
              const std::function<double(const Point&, Gradient*)>& objective,
              const std::function<Point(const Point&, const Gradient&, double)>& step,
              const std::function<double(const Gradient&, const Gradient&)>& dot) {
  const double floor2 = kPolishFloor * kPolishFloor;
  double eta = cfg.step_rule == StepRule::Fixed ? cfg.fixed_step : 1.0;

  Gradient grad;
  double f = objective(x, &grad);
  // Barzilai-Borwein step from the previous iteration, 0 when unavailable.
  double bb = 0.0;
  // Armijo reference: the largest of the last kMemory objective values.
  std::deque<double> recent{f};
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (f <= floor2) break;
    const double g2 = dot(grad, grad);
    if (g2 <= kStationary) break;

    if (cfg.step_rule == StepRule::Fixed) {
      x = step(x, grad, eta);
      f = objective(x, &grad);
      if (!std::isfinite(f)) break;
      continue;
    }

    // Trial step: the Barzilai-Borwein step when available.  Otherwise double
    // the last step and also try the minimizer of the quadratic through f,
    // the slope -g2 and the trial value; the lower one seeds the backtrack.
    const bool have_bb = bb > kMinStep;
    double trial = std::min(have_bb ? bb : 2.0 * eta, kMaxStep);
    Point candidate = step(x, grad, trial);
    double f_new = objective(candidate, nullptr);
    const double curvature = 2.0 * (f_new - f + g2 * trial);
    if (!have_bb && curvature > 0.0) {
      const double fitted = std::min(g2 * trial * trial / curvature, kMaxStep);
      if (fitted > kMinStep && std::abs(fitted - trial) > 1e-3 * trial) {
        Point alt = step(x, grad, fitted);
        const double f_alt = objective(alt, nullptr);
        if (f_alt < f_new) {
          candidate = std::move(alt);
          f_new = f_alt;
          trial = fitted;
        }
      }
    }
    const double reference = *std::max_element(recent.begin(), recent.end());
    std::optional<Point> accepted;
    while (true) {
      if (f_new <= reference - kArmijo * trial * g2) {
        accepted = std::move(candidate);
        break;
      }
      trial *= 0.5;
      if (trial < kMinStep) break;
      candidate = step(x, grad, trial);
      f_new = objective(candidate, nullptr);
    }
    if (!accepted) break;  // no further decrease available
    x = std::move(*accepted);
    eta = trial;
    Gradient previous = std::move(grad);
    f = objective(x, &grad);
    recent.push_back(f);
    if (recent.size() > kMemory) recent.pop_front();

    // s = -eta * g_old and y = g_new - g_old, compared in the ambient space;
    // alternate the long and short BB steps.
    const double sy = eta * (g2 - dot(previous, grad));
    const double yy = dot(grad, grad) - 2.0 * dot(previous, grad) + g2;
    bb = 0.0;
    if (sy > 0.0 && yy > 0.0) bb = it % 2 == 0 ? eta * eta * g2 / sy : sy / yy;
  }
  return x;
}

RestartOutcome run_unitary_restart(const SchurSymbol& symbol, std::size_t d,
                                   std::size_t restart, const SearchConfig& cfg) {
  using Point = std::vector<ComplexMatrix>;
  const std::size_t n = symbol.n();
  Point v(n);
  v[0] = identity(d);
  for (std::size_t i = 1; i < n; ++i) {
    auto rng = seeded_rng(cfg.seed, d, restart, i);
    v[i] = haar_like_unitary(rng, d);
  }

  const ComplexMatrix& m = symbol.matrix();
  std::function<double(const Point&, Point*)> objective = [&m](const Point& x, Point* rgrad) {
    if (rgrad == nullptr) return detail::unitary_objective(x, m, nullptr);
    Point egrad;
    const double f = detail::unitary_objective(x, m, &egrad);
    *rgrad = detail::riemannian_gradient(x, egrad);
    return f;
  };
  std::function<Point(const Point&, const Point&, double)> step =
      [](const Point& x, const Point& g, double eta) {
        Point out(x.size());
        out[0] = x[0];
        for (std::size_t k = 1; k < x.size(); ++k) out[k] = unitary_polar_factor(x[k] - eta * g[k]);
        return out;
      };
  std::function<double(const Point&, const Point&)> dot = [](const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].adjoint() * b[k]).trace().real();
    return s;
  };

  RestartOutcome out;
  out.witness.n = n;
  out.witness.d = d;
  out.witness.v = descend<Point, Point>(std::move(v), cfg, objective, step, dot);
  out.witness.residual = residual(out.witness, symbol);
  out.success = out.witness.residual <= cfg.target_residual;
  return out;
}

RestartOutcome run_phase_restart(const SchurSymbol& symbol, std::size_t d, std::size_t restart,
                                 const SearchConfig& cfg) {
  using Point = Eigen::MatrixXd;
  const std::size_t n = symbol.n();
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);
  Point theta = Point::Zero(rows, cols);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 1; i < n; ++i) {
    auto rng = seeded_rng(cfg.seed, d, restart, i);
    for (Eigen::Index k = 0; k < cols; ++k) theta(static_cast<Eigen::Index>(i), k) = angle(rng);
  }

  const ComplexMatrix& m = symbol.matrix();
  std::function<double(const Point&, Point*)> objective = [&m](const Point& x, Point* g) {
    return detail::phase_objective(x, m, g);
  };
  std::function<Point(const Point&, const Point&, double)> step =
      [](const Point& x, const Point& g, double eta) -> Point { return x - eta * g; };
  std::function<double(const Point&, const Point&)> dot = [](const Point& a, const Point& b) {
    return a.cwiseProduct(b).sum();
  };

  theta = descend<Point, Point>(std::move(theta), cfg, objective, step, dot);

  RestartOutcome out;
  out.witness.n = n;
  out.witness.d = d;
  out.witness.v.reserve(n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    ComplexMatrix vi = ComplexMatrix::Zero(cols, cols);
    for (Eigen::Index k = 0; k < cols; ++k) vi(k, k) = std::polar(1.0, theta(i, k));
    out.witness.v.push_back(std::move(vi));
  }
  out.witness.residual = residual(out.witness, symbol);
  out.success = out.witness.residual <= cfg.target_residual;
  return out;
}

using RestartFn = RestartOutcome (*)(const SchurSymbol&, std::size_t, std::size_t,
                                     const SearchConfig&);

SearchResult run_search(const SchurSymbol& symbol, const SearchConfig& cfg, RestartFn restart_fn) {
  cfg.validate();
  require_valid_symbol(symbol);

  const std::size_t workers = std::max<std::size_t>(
      1, cfg.workers == 0 ? default_worker_count() : cfg.workers);

  std::optional<UnitaryWitness> best;
  for (std::size_t d = cfg.d_min; d <= cfg.d_max; ++d) {
    for (std::size_t begin = 0; begin < cfg.restarts; begin += workers) {
      const std::size_t end = std::min(cfg.restarts, begin + workers);
      std::vector<RestartOutcome> batch(end - begin);
      if (workers == 1) {
        batch[0] = restart_fn(symbol, d, begin, cfg);
      } else {
        std::vector<std::future<RestartOutcome>> pending;
        pending.reserve(end - begin);
        for (std::size_t r = begin; r < end; ++r) {
          pending.push_back(std::async(std::launch::async, restart_fn, std::cref(symbol), d, r,
                                       std::cref(cfg)));
        }
        for (std::size_t k = 0; k < pending.size(); ++k) batch[k] = pending[k].get();
      }
      // Batches are scanned in restart order, so the reduction does not
      // depend on which worker finished first.
      for (auto& outcome : batch) {
        if (outcome.success) return std::move(outcome.witness);
        if (!best || outcome.witness.residual < best->residual) best = std::move(outcome.witness);
      }
    }
  }
  NotFound nf;
  nf.best_residual = best->residual;
  nf.best_witness = std::move(*best);
  return nf;
}

}  // namespace

void SearchConfig::validate() const {
  if (d_min == 0) throw DomainError("SearchConfig: d_min must be positive");
  if (d_min > d_max) throw DomainError("SearchConfig: d_min exceeds d_max");
  if (restarts == 0) throw DomainError("SearchConfig: restarts must be positive");
  if (max_iters == 0) throw DomainError("SearchConfig: max_iters must be positive");
  if (!(target_residual > 0.0)) throw DomainError("SearchConfig: target_residual must be > 0");
  if (step_rule == StepRule::Fixed && !(fixed_step > 0.0)) {
    throw DomainError("SearchConfig: fixed_step must be > 0");
  }
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("SCHURDIL_WORKERS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComplexMatrix gram_of(const UnitaryWitness& w) {
  const auto n = static_cast<Eigen::Index>(w.v.size());
  ComplexMatrix g(n, n);
  const double inv_d = 1.0 / static_cast<double>(w.d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = (w.v[static_cast<std::size_t>(i)].adjoint() * w.v[static_cast<std::size_t>(j)])
                    .trace() * inv_d;
    }
  }
  return g;
}

double residual(const UnitaryWitness& w, const SchurSymbol& symbol) {
  if (w.v.size() != symbol.n()) {
    throw DimensionError("residual: witness has " + std::to_string(w.v.size()) +
                         " unitaries, symbol has n = " + std::to_string(symbol.n()));
  }
  return (gram_of(w) - symbol.matrix()).norm();
}

SearchResult search_witness(const SchurSymbol& symbol, const SearchConfig& cfg) {
  if (cfg.diagonal_only) return diagonal_witness_search(symbol, cfg);
  return run_search(symbol, cfg, &run_unitary_restart);
}

SearchResult diagonal_witness_search(const SchurSymbol& symbol, const SearchConfig& cfg) {
  return run_search(symbol, cfg, &run_phase_restart);
}

UnitaryWitness fourier_witness(std::size_t n) {
  if (n == 0) throw DomainError("fourier_witness: n must be positive");
  UnitaryWitness w;
  w.n = n;
  w.d = n;
  const auto s = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < n; ++i) {
    ComplexMatrix vi = ComplexMatrix::Zero(s, s);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t e = (i * k) % n;
      // quarter turns are written exactly
      Complex z;
      if ((4 * e) % n == 0) {
        static constexpr Complex kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        z = kQuarter[(4 * e / n) % 4];
      } else {
        z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
      }
      vi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = z;
    }
    w.v.push_back(std::move(vi));
  }
  w.residual = (gram_of(w) - identity(n)).norm();
  return w;
}

UnitaryWitness direct_sum(const UnitaryWitness& a, const UnitaryWitness& b) {
  if (a.v.size() != b.v.size()) throw DimensionError("direct_sum: witnesses differ in n");
  UnitaryWitness out;
  out.n = a.v.size();
  out.d = a.d + b.d;
  const auto da = static_cast<Eigen::Index>(a.d);
  const auto db = static_cast<Eigen::Index>(b.d);
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    ComplexMatrix vi = ComplexMatrix::Zero(da + db, da + db);
    vi.topLeftCorner(da, da) = a.v[i];
    vi.bottomRightCorner(db, db) = b.v[i];
    out.v.push_back(std::move(vi));
  }
  return out;
}

WitnessReport verify_witness(const UnitaryWitness& w, const SchurSymbol& symbol, double tol) {
  if (w.v.size() != symbol.n()) throw DimensionError("verify_witness: n mismatch");
  WitnessReport report;
  for (const auto& vi : w.v) {
    if (vi.rows() != static_cast<Eigen::Index>(w.d) || vi.cols() != vi.rows()) {
      throw DimensionError("verify_witness: unitary has wrong size");
    }
    const RealVector s = singular_values(vi);
    const double dist = (s.array() - 1.0).matrix().norm();
    report.unitarity_defect = std::max(report.unitarity_defect, dist);
  }

  // Gram entries summed elementwise: sum_ab conj(v_i(a,b)) v_j(a,b) / d.
  const std::size_t n = symbol.n();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      const ComplexMatrix& vi = w.v[i];
      const ComplexMatrix& vj = w.v[j];
      for (Eigen::Index c = 0; c < vi.cols(); ++c) {
        for (Eigen::Index r = 0; r < vi.rows(); ++r) acc += std::conj(vi(r, c)) * vj(r, c);
      }
      acc /= static_cast<double>(w.d);
      sq += std::norm(acc - symbol(i, j));
    }
  }
  report.residual = std::sqrt(sq);
  report.pass = report.unitarity_defect < tol && report.residual < tol;
  return report;
}

namespace detail {

double unitary_objective(std::span<const ComplexMatrix> v, const ComplexMatrix& m,
                         std::vector<ComplexMatrix>* egrad) {
  const std::size_t n = v.size();
  const Eigen::Index d = v.front().rows();
  const Eigen::Index dd = d * d;
  ComplexMatrix stacked(dd, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    stacked.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXcd>(v[i].data(), dd);
  }
  const double inv_d = 1.0 / static_cast<double>(d);
  const ComplexMatrix r = stacked.adjoint() * stacked * inv_d - m;
  const double f = r.squaredNorm();
  if (egrad != nullptr) {
    const ComplexMatrix g = (2.0 * inv_d) * stacked * (r + r.adjoint());
    egrad->resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      (*egrad)[k] = Eigen::Map<const ComplexMatrix>(g.col(static_cast<Eigen::Index>(k)).data(), d, d);
    }
  }
  return f;
}

std::vector<ComplexMatrix> riemannian_gradient(std::span<const ComplexMatrix> v,
                                               std::span<const ComplexMatrix> egrad) {
  std::vector<ComplexMatrix> out(v.size());
  out[0] = ComplexMatrix::Zero(v[0].rows(), v[0].cols());
  for (std::size_t k = 1; k < v.size(); ++k) {
    const ComplexMatrix a = v[k].adjoint() * egrad[k];
    out[k] = v[k] * (0.5 * (a - a.adjoint()));
  }
  return out;
}

double phase_objective(const Eigen::MatrixXd& theta, const ComplexMatrix& m, Eigen::MatrixXd* grad) {
  const Eigen::Index n = theta.rows();
  const Eigen::Index d = theta.cols();
  ComplexMatrix z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) z(i, k) = std::polar(1.0, theta(i, k));
  }
  const double inv_d = 1.0 / static_cast<double>(d);
  const ComplexMatrix r = z.conjugate() * z.transpose() * inv_d - m;
  const double f = r.squaredNorm();
  if (grad != nullptr) {
    const ComplexMatrix rt_z = r.transpose() * z;
    const ComplexMatrix rc_z = r.conjugate() * z;
    const Complex i_unit(0.0, 1.0);
    grad->resize(n, d);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const Complex t = i_unit * z(a, k) * std::conj(rt_z(a, k)) -
                          i_unit * std::conj(z(a, k)) * rc_z(a, k);
        (*grad)(a, k) = a == 0 ? 0.0 : 2.0 * inv_d * t.real();
      }
    }
  }
  return f;
}

}  // namespace detail

}  // namespace schurdil
