// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Runtime limits are part of each criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "schurdil/dilation.hpp"
#include "schurdil/opalg.hpp"
#include "schurdil/schur.hpp"
#include "schurdil/serialize.hpp"
#include "schurdil/witness.hpp"
#include "support/random.hpp"

using namespace schurdil;
using namespace schurdil::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the worst value seen against a bound.
struct Bound {
  const char* name;
  double limit;
  double worst = 0.0;
  void see(double v) { worst = std::max(worst, v); }
  bool ok() const { return worst <= limit; }
  std::string str() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%.2e (<= %.0e)", name, worst, limit);
    return buf;
  }
};

Outcome positivity_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> mod(0.0, 0.8);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  int agree = 0, psd = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = i + 1; j < 4; ++j) {
        m(i, j) = std::polar(mod(rng), phase(rng));
        m(j, i) = std::conj(m(i, j));
      }
    }
    const SchurSymbol s(m);
    const bool m_psd = hermitian_eigen(m).values.minCoeff() >= -kDefaultTol;
    const bool choi_psd = hermitian_eigen(choi_matrix(s)).values.minCoeff() >= -kDefaultTol;
    agree += m_psd == choi_psd;
    psd += m_psd;
  }
  return {agree == 100, std::to_string(agree) + "/100 agree, " + std::to_string(psd) + " PSD"};
}

Outcome witness_recovery() {
  std::mt19937_64 rng(1002);
  int found = 0;
  Bound res{"worst_residual", 1e-8};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 3;
    const std::size_t d = 1 + static_cast<std::size_t>(trial / 3) % 3;
    const SchurSymbol s(gram_of(random_witness(rng, n, d)));
    SearchConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const SearchResult r = search_witness(s, cfg);
    if (const auto* w = std::get_if<UnitaryWitness>(&r)) {
      ++found;
      res.see(w->residual);
    } else {
      res.see(std::get<NotFound>(r).best_residual);
    }
  }
  return {found == 20 && res.ok(), std::to_string(found) + "/20 found, " + res.str()};
}

Outcome exact_fixtures() {
  SearchConfig cfg;
  const SearchResult r = search_witness(SchurSymbol::all_ones(4), cfg);
  const auto* w = std::get_if<UnitaryWitness>(&r);
  bool pass = w && w->d == 1 && w->residual <= 1e-14 &&
              verify_witness(*w, SchurSymbol::all_ones(4), 1e-13).pass;
  Bound fourier{"fourier_residual", 1e-12};
  for (std::size_t n : {2u, 3u, 4u}) {
    const WitnessReport rep = verify_witness(fourier_witness(n), SchurSymbol::identity(n), 1e-12);
    fourier.see(rep.residual);
    pass = pass && rep.pass;
  }
  std::string detail = "all-ones d=" + (w ? std::to_string(w->d) : std::string("none"));
  if (w) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " residual=%.2e, ", w->residual);
    detail += buf;
  }
  return {pass && fourier.ok(), detail + fourier.str()};
}

Outcome dilation_identity() {
  std::mt19937_64 rng(1004);
  Bound dev{"max_deviation", 1e-10};
  Bound power{"power_law", 1e-10};
  for (std::size_t nd : {2u, 3u}) {
    const UnitaryWitness w = random_witness(rng, nd, nd);
    const SchurSymbol s(gram_of(w));
    const TruncatedDilation dil = build_dilation({w}, 4);
    dev.see(verify_dilation(dil, std::span(&s, 1), 1e-10).max_deviation);
    // entrywise powers m_ij^k, computed directly from the symbol
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j < nd; ++j) {
        ComplexMatrix y = embed_J(dil, unit_matrix(nd, i, j));
        for (int k = 0; k <= 4; ++k) {
          const Complex expected =
              std::pow(s.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), k);
          power.see((expect_E(dil, y) - expected * unit_matrix(nd, i, j)).norm());
          y = apply_U(dil, 0, y);
        }
      }
    }
  }
  return {dev.ok() && power.ok(), "n=d=2 (dim 32), n=d=3 (dim 243), " + dev.str() + ", " + power.str()};
}

Outcome simultaneous_dilation() {
  std::mt19937_64 rng(1005);
  const UnitaryWitness w1 = random_witness(rng, 2, 2), w2 = random_witness(rng, 2, 2);
  const SchurSymbol symbols[] = {SchurSymbol(gram_of(w1)), SchurSymbol(gram_of(w2))};
  const TruncatedDilation dil = build_dilation({w1, w2}, 2);
  const DilationReport r = verify_dilation(dil, symbols, 1e-10);
  Bound dev{"max_deviation", 1e-10};
  Bound comm{"commutator", 1e-12};
  dev.see(r.max_deviation);
  comm.see(r.commutator_norm);
  const bool pass = dil.total_dim() == 32 && r.per_index.size() == 6 && dev.ok() && comm.ok() && r.pass;
  return {pass, std::to_string(r.per_index.size()) + " indices, " + dev.str() + ", " + comm.str()};
}

Outcome norming_functional_check() {
  std::mt19937_64 rng(1006);
  Bound pairing{"pairing", 1e-9}, qnorm{"q_norm", 1e-9}, polar{"polar", 1e-9};
  int violations = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    const double q = p / (p - 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix x = random_matrix(rng, 4);
      const NormingPair np = norming_functional(x, p);
      const double nx = schatten_norm(x, p);
      const ComplexMatrix xhat = x / nx;
      pairing.see(std::abs((xhat * np.y).trace() - 1.0));
      qnorm.see(std::abs(schatten_norm(np.y, q) - 1.0));
      polar.see(np.polar_defect);
      for (int k = 0; k < 200; ++k) {
        ComplexMatrix z = random_matrix(rng, 4);
        z /= schatten_norm(z, q);
        violations += std::abs((xhat * z).trace()) > 1.0 + 1e-9;
      }
    }
  }
  return {pairing.ok() && qnorm.ok() && polar.ok() && violations == 0,
          pairing.str() + ", " + qnorm.str() + ", " + polar.str() + ", maximality violations=" +
              std::to_string(violations)};
}

Outcome proof_machinery() {
  std::mt19937_64 rng(1007);
  Bound units{"units", 1e-10}, taka{"takesaki", 1e-11}, conj{"conjugation", 1e-11},
      inj{"injectivity", 1e-10};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 2;
    const std::size_t k = 1 + static_cast<std::size_t>(trial / 2) % 2;
    const auto dim = static_cast<Eigen::Index>(n * k);
    const MatrixUnitSystem f = MatrixUnitSystem::tensored(n, k).conjugated(random_unitary(rng, dim));
    const MatrixUnitSystem g = MatrixUnitSystem::tensored(n, k).conjugated(random_unitary(rng, dim));
    const MatrixUnitReport ur = verify_matrix_units(f, 1e-10);
    units.see(std::max({ur.adjoint_defect, ur.product_defect, ur.sum_defect}));

    const ComplexMatrix x = random_matrix(rng, dim), y = random_matrix(rng, dim);
    taka.see((takesaki_iso(f, x * y) - takesaki_iso(f, x) * takesaki_iso(f, y)).norm());
    taka.see(std::abs(takesaki_iso(f, x).trace() - x.trace()));

    const ComplexMatrix u = conjugating_unitary(f, g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) conj.see((u * f(i, j) * u.adjoint() - g(i, j)).norm());

    const ComplexMatrix psd = random_psd(rng, 4, 1 + trial % 4);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(psd).singularValues();
    double lmin = sv(0);
    for (Eigen::Index r = 0; r < sv.size(); ++r)
      if (sv(r) > 1e-8 * sv(0)) lmin = std::min(lmin, sv(r));
    inj.see(std::abs(support_compression_injectivity(psd) - lmin * lmin));
  }
  return {units.ok() && taka.ok() && conj.ok() && inj.ok(),
          "20 instances each, " + units.str() + ", " + taka.str() + ", " + conj.str() + ", " + inj.str()};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "schurdil_acceptance";
  fs::create_directories(dir);
  std::mt19937_64 rng(1008);
  const ComplexMatrix symbols[] = {identity(2), ComplexMatrix::Ones(3, 3),
                                   gram_of(random_witness(rng, 4, 3)),
                                   gram_of(random_witness(rng, 3, 2))};
  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  int identical = 0, rechecked = 0, count = 0;
  for (const auto& m : symbols) {
    const fs::path sym = dir / ("symbol" + std::to_string(count) + ".json");
    std::ofstream(sym) << dump(matrix_to_json(m));
    std::string texts[2];
    bool certified = true;
    for (int run = 0; run < 2; ++run) {
      cli::Options opts;
      opts.search.seed = 2024;
      opts.out = (dir / ("cert" + std::to_string(count) + "_" + std::to_string(run) + ".json")).string();
      std::ostringstream out, err;
      certified = certified && cli::cmd_certify(sym.string(), opts, out, err) == cli::kExitOk;
      texts[run] = read(opts.out);
      std::ostringstream rout, rerr;
      rechecked += cli::cmd_recheck(opts.out, cli::Options{}, rout, rerr) == cli::kExitOk;
    }
    identical += certified && !texts[0].empty() && texts[0] == texts[1];
    ++count;
  }
  fs::remove_all(dir);
  return {identical == count && rechecked == 2 * count,
          std::to_string(identical) + "/" + std::to_string(count) + " byte-identical, " +
              std::to_string(rechecked) + "/" + std::to_string(2 * count) + " rechecks exit 0"};
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"positivity equivalence", 1.0, positivity_equivalence},
      {"witness recovery", 300.0, witness_recovery},
      {"exact fixtures", 0.0, exact_fixtures},
      {"dilation identity", 30.0, dilation_identity},
      {"simultaneous dilation", 0.0, simultaneous_dilation},
      {"norming functional", 0.0, norming_functional_check},
      {"proof machinery", 0.0, proof_machinery},
      {"determinism", 0.0, determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds <= 0.0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    char timing[64];
    if (c.limit_seconds > 0.0) {
      std::snprintf(timing, sizeof timing, "%.2fs (< %.0fs)", secs, c.limit_seconds);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    }
    std::printf("[%s] %d. %s: %s; %s\n", pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), timing);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
