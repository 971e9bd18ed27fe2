#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace schurdil::cli {

namespace {

void print_human(const Json& j, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      out << pad << key << ":\n";
      print_human(value, out, indent + 2);
    } else if (value.is_array() && !value.empty() && value.front().is_array()) {
      out << pad << key << ": <" << value.size() << " rows>\n";
    } else if (value.is_string()) {
      out << pad << key << ": " << value.get<std::string>() << "\n";
    } else {
      out << pad << key << ": " << value.dump() << "\n";
    }
  }
}

void emit(const Json& j, const Options& opts, std::ostream& out) {
  if (opts.json) {
    out << dump(j);
  } else {
    print_human(j, out);
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  if (!file) throw Error("failed writing '" + path + "'");
}

// Full document to --out (with a short summary on `out`), or to `out` itself.
void deliver(const Json& document, const Json& summary, const Options& opts, std::ostream& out) {
  if (opts.out.empty()) {
    out << dump(document);
    return;
  }
  write_file(opts.out, dump(document));
  Json s = summary;
  s["written_to"] = opts.out;
  emit(s, opts, out);
}

SchurSymbol load_symbol(const std::string& path) { return symbol_from_json(load_json_file(path)); }

Json dilation_summary(const DilationReport& r, std::size_t depth) {
  return Json{{"depth", depth},
              {"max_deviation", r.max_deviation},
              {"commutator_norm", r.commutator_norm},
              {"trace_defect", r.trace_defect},
              {"duality_defect", r.duality_defect},
              {"tolerance", r.tolerance},
              {"pass", r.pass}};
}

// Tolerance for the dilation identity given a witness that is only accurate
// to `residual`: the k-th power of each symbol entry moves by at most about
// k * residual.
double dilation_tolerance(double tol, std::size_t depth, double residual) {
  return std::max(tol, 10.0 * static_cast<double>(depth) * residual);
}

}  // namespace

std::size_t fit_depth(std::size_t n, std::size_t block_dim, std::size_t requested, std::size_t cap) {
  std::size_t depth = 0;
  std::size_t dim = n;
  while (depth < requested && block_dim > 0 && dim <= cap / block_dim) {
    dim *= block_dim;
    ++depth;
  }
  return depth;
}

int cmd_validate(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const SchurSymbol symbol = load_symbol(input);
    const ValidityReport r = validate_symbol(symbol, opts.tol);
    Json j = validity_to_json(r);
    j["n"] = symbol.n();
    emit(j, opts, out);
    return r.valid() ? kExitOk : kExitInvalid;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
}

int cmd_search(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const SchurSymbol symbol = load_symbol(input);
    const SearchResult result = search_witness(symbol, opts.search);
    if (const auto* w = std::get_if<UnitaryWitness>(&result)) {
      Json doc{{"status", "found"}, {"witness", witness_to_json(*w)},
               {"search_config", config_to_json(opts.search)}};
      deliver(doc, Json{{"status", "found"}, {"d", w->d}, {"residual", w->residual}}, opts, out);
      return kExitOk;
    }
    const auto& nf = std::get<NotFound>(result);
    Json doc{{"status", "not_found"}, {"best_residual", nf.best_residual},
             {"best_witness", witness_to_json(nf.best_witness)},
             {"search_config", config_to_json(opts.search)}};
    deliver(doc, Json{{"status", "not_found"}, {"best_residual", nf.best_residual}}, opts, out);
    return kExitNotFound;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidSymbolError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_dilate(const std::vector<std::string>& pairs, const Options& opts, std::ostream& out,
               std::ostream& err) {
  try {
    if (pairs.empty() || pairs.size() % 2 != 0) {
      throw ParseError("dilate expects SYMBOL WITNESS pairs");
    }
    std::vector<SchurSymbol> symbols;
    std::vector<UnitaryWitness> witnesses;
    for (std::size_t k = 0; k < pairs.size(); k += 2) {
      symbols.push_back(load_symbol(pairs[k]));
      Json wj = load_json_file(pairs[k + 1]);
      // accept the output of `search` as well as a bare witness
      if (wj.is_object() && wj.contains("witness")) wj = wj.at("witness");
      witnesses.push_back(witness_from_json(wj));
    }
    double worst_residual = 0.0;
    for (std::size_t l = 0; l < symbols.size(); ++l) {
      worst_residual = std::max(worst_residual, residual(witnesses[l], symbols[l]));
    }
    DilationOptions dopts;
    dopts.max_total_dim = opts.max_total_dim;
    dopts.shift = opts.joint_shift ? ShiftMode::Joint : ShiftMode::PerMultiplier;
    const TruncatedDilation dil = build_dilation(witnesses, opts.depth, dopts);
    const DilationReport r =
        verify_dilation(dil, symbols, dilation_tolerance(opts.tol, opts.depth, worst_residual));
    Json doc = dilation_report_to_json(r);
    doc["depth"] = dil.depth();
    doc["total_dim"] = dil.total_dim();
    deliver(doc, dilation_summary(r, dil.depth()), opts, out);
    return r.pass ? kExitOk : kExitInvalid;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_certify(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const SchurSymbol symbol = load_symbol(input);
    const ValidityReport validity = validate_symbol(symbol, opts.tol);
    if (!validity.valid()) {
      Json j = validity_to_json(validity);
      j["status"] = "invalid_symbol";
      emit(j, opts, out);
      return kExitInvalid;
    }

    const SearchResult result = search_witness(symbol, opts.search);
    if (const auto* nf = std::get_if<NotFound>(&result)) {
      Json doc{{"status", "not_found"},
               {"best_residual", nf->best_residual},
               {"best_witness", witness_to_json(nf->best_witness)},
               {"search_config", config_to_json(opts.search)},
               {"symbol", symbol_to_json(symbol)}};
      deliver(doc, Json{{"status", "not_found"}, {"best_residual", nf->best_residual}}, opts, out);
      return kExitNotFound;
    }

    Certificate cert;
    cert.seed = opts.search.seed;
    cert.symbol = symbol.matrix();
    cert.witness = std::get<UnitaryWitness>(result);
    cert.search_config = opts.search;
    cert.residual = cert.witness.residual;
    cert.witness_tolerance = 10.0 * opts.search.target_residual;

    const WitnessReport wr = verify_witness(cert.witness, symbol, cert.witness_tolerance);
    if (!wr.pass) {
      err << "witness failed independent verification (residual " << wr.residual
          << ", unitarity defect " << wr.unitarity_defect << ")\n";
      return kExitInvalid;
    }

    Json summary{{"status", "certified"}, {"d", cert.witness.d}, {"residual", cert.residual}};
    const std::size_t depth = fit_depth(symbol.n(), cert.witness.d, opts.depth, opts.max_total_dim);
    if (depth > 0) {
      DilationOptions dopts;
      dopts.max_total_dim = opts.max_total_dim;
      dopts.shift = opts.joint_shift ? ShiftMode::Joint : ShiftMode::PerMultiplier;
      const TruncatedDilation dil = build_dilation({cert.witness}, depth, dopts);
      const std::vector<SchurSymbol> symbols{symbol};
      CertificateDilation cd;
      cd.depth = depth;
      cd.shift = dopts.shift;
      cd.report = verify_dilation(dil, symbols, dilation_tolerance(opts.tol, depth, cert.residual));
      summary["dilation"] = dilation_summary(cd.report, depth);
      const bool pass = cd.report.pass;
      cert.dilation = std::move(cd);
      if (!pass) {
        err << "dilation identity failed verification\n";
        deliver(certificate_to_json(cert), summary, opts, out);
        return kExitInvalid;
      }
    }
    deliver(certificate_to_json(cert), summary, opts, out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_recheck(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err) {
  Certificate cert;
  try {
    cert = certificate_from_json(load_json_file(path));
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  }

  constexpr double kReproduce = 1e-12;
  try {
    const SchurSymbol symbol(cert.symbol);
    const WitnessReport wr = verify_witness(cert.witness, symbol, cert.witness_tolerance);
    const double recomputed = residual(cert.witness, symbol);
    const bool residual_matches = std::abs(recomputed - cert.residual) <= kReproduce;
    Json report{{"witness", witness_report_to_json(wr)},
                {"recorded_residual", cert.residual},
                {"recomputed_residual", recomputed},
                {"residual_matches", residual_matches}};
    bool ok = wr.pass && residual_matches;

    if (cert.dilation) {
      DilationOptions dopts;
      dopts.max_total_dim = std::max(opts.max_total_dim, std::size_t{4096});
      dopts.shift = cert.dilation->shift;
      const TruncatedDilation dil = build_dilation({cert.witness}, cert.dilation->depth, dopts);
      const std::vector<SchurSymbol> symbols{symbol};
      const DilationReport dr = verify_dilation(dil, symbols, cert.dilation->report.tolerance);
      const bool matches =
          std::abs(dr.max_deviation - cert.dilation->report.max_deviation) <= kReproduce &&
          dr.pass == cert.dilation->report.pass;
      report["dilation"] = dilation_summary(dr, cert.dilation->depth);
      report["dilation_matches"] = matches;
      ok = ok && dr.pass && matches;
    }
    report["pass"] = ok;
    emit(report, opts, out);
    return ok ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_norming(const std::string& input, const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const Json j = load_json_file(input);
    const ComplexMatrix x = matrix_from_json(j.is_object() ? j.at("m") : j);
    const NormingPair pair = norming_functional(x, opts.p);
    const Complex pairing = (x * pair.y).trace();
    Json doc = norming_to_json(pair);
    doc["norm_p"] = schatten_norm(x, pair.p);
    doc["norm_q_of_y"] = schatten_norm(pair.y, pair.q);
    doc["pairing"] = {pairing.real(), pairing.imag()};
    deliver(doc, Json{{"p", pair.p}, {"norm_p", schatten_norm(x, pair.p)}}, opts, out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify factorizability of unital positive Schur multipliers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Options opts;
  std::string input;
  std::vector<std::string> pairs;
  std::string step_rule = "backtracking";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", opts.tol, "Verification tolerance")->capture_default_str();
    cmd->add_flag("--json", opts.json, "Machine-readable report on stdout");
    cmd->add_option("--out", opts.out, "Write the full document to this file");
  };
  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option("--d-min", opts.search.d_min, "Smallest witness dimension")->capture_default_str();
    cmd->add_option("--d-max", opts.search.d_max, "Largest witness dimension")->capture_default_str();
    cmd->add_option("--restarts", opts.search.restarts, "Restarts per dimension")->capture_default_str();
    cmd->add_option("--max-iters", opts.search.max_iters, "Iterations per restart")->capture_default_str();
    cmd->add_option("--target", opts.search.target_residual, "Target Gram residual")->capture_default_str();
    cmd->add_option("--seed", opts.search.seed, "Random seed")->capture_default_str();
    cmd->add_option("--step-rule", step_rule, "backtracking or fixed")
        ->check(CLI::IsMember({"backtracking", "fixed"}))
        ->capture_default_str();
    cmd->add_option("--fixed-step", opts.search.fixed_step, "Step size for --step-rule fixed");
    cmd->add_flag("--diagonal", opts.search.diagonal_only, "Search diagonal unitaries only");
    cmd->add_option("--workers", opts.search.workers, "Worker threads (default: SCHURDIL_WORKERS)");
  };
  auto add_dilation = [&](CLI::App* cmd) {
    cmd->add_option("--depth", opts.depth, "Tensor depth K")->capture_default_str();
    cmd->add_option("--max-dim", opts.max_total_dim, "Cap on n * D^K")->capture_default_str();
    cmd->add_flag("--joint-shift", opts.joint_shift, "Shift whole blocks instead of per-multiplier slots");
  };

  auto* validate = app.add_subcommand("validate", "Check Hermitian / PSD / unit diagonal");
  validate->add_option("symbol", input, "Symbol JSON file")->required();
  add_common(validate);

  auto* search = app.add_subcommand("search", "Search for a unitary Gram witness");
  search->add_option("symbol", input, "Symbol JSON file")->required();
  add_common(search);
  add_search(search);

  auto* dilate = app.add_subcommand("dilate", "Build and verify a truncated dilation");
  dilate->add_option("pairs", pairs, "SYMBOL WITNESS [SYMBOL WITNESS ...]")->required();
  add_common(dilate);
  add_dilation(dilate);

  auto* certify = app.add_subcommand("certify", "Validate, search, dilate and emit a certificate");
  certify->add_option("symbol", input, "Symbol JSON file")->required();
  add_common(certify);
  add_search(certify);
  add_dilation(certify);

  auto* recheck = app.add_subcommand("recheck", "Re-verify a stored certificate");
  recheck->add_option("certificate", input, "Certificate JSON file")->required();
  add_common(recheck);

  auto* norming = app.add_subcommand("norming", "Norming functional of a matrix in S^p");
  norming->add_option("matrix", input, "Matrix JSON file")->required();
  norming->add_option("--p", opts.p, "Schatten exponent, 1 < p < inf")->capture_default_str();
  add_common(norming);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream sout;
    std::ostringstream serr;
    const int code = app.exit(e, sout, serr);
    out << sout.str();
    err << serr.str();
    return code == 0 ? kExitOk : kExitParse;
  }
  opts.search.step_rule = step_rule == "fixed" ? StepRule::Fixed : StepRule::Backtracking;

  try {
    if (*validate) return cmd_validate(input, opts, out, err);
    if (*search) return cmd_search(input, opts, out, err);
    if (*dilate) return cmd_dilate(pairs, opts, out, err);
    if (*certify) return cmd_certify(input, opts, out, err);
    if (*recheck) return cmd_recheck(input, opts, out, err);
    if (*norming) return cmd_norming(input, opts, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitParse;
}

}  // namespace schurdil::cli
