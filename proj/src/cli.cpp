#include "eqo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "eqo/appendix_checks.hpp"
#include "eqo/catalog.hpp"
#include "eqo/gaussian_oracle.hpp"
#include "eqo/json_io.hpp"

namespace eqo::cli {
namespace {

using json_io::json;

constexpr double kOracleTol = 1e-6;
constexpr double kAppendixTol = 1e-7;

struct SourceOptions {
  std::string catalog;
  std::vector<std::string> params;
  std::string input;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(what + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw InvalidArgument(what + ": '" + text + "' is not a finite number");
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("--input: cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("--input: '" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

std::map<std::string, double> params_from_json(const json& j) {
  std::map<std::string, double> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw InvalidArgument("params: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw InvalidArgument("params." + key + ": expected a number");
    out[key] = value.get<double>();
  }
  return out;
}

// Fills generator or transfer from --catalog/--param or --input.
void resolve_source(const SourceOptions& src, JobSpec& job) {
  const bool has_catalog = !src.catalog.empty();
  const bool has_input = !src.input.empty();
  if (has_catalog == has_input) throw InvalidArgument("exactly one of --catalog or --input is required");
  if (has_catalog) {
    std::map<std::string, double> params;
    for (const auto& kv : src.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw InvalidArgument("--param: expected K=V, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      params[key] = parse_double(kv.substr(eq + 1), "--param " + key);
    }
    job.generator = make_named<double>(src.catalog, params).generator;
    job.source_label = src.catalog;
    return;
  }
  if (!src.params.empty()) throw InvalidArgument("--param is only valid together with --catalog");
  const json doc = read_json_file(src.input);
  if (!doc.is_object()) throw InvalidArgument("--input: expected a JSON object");
  const int forms = int(doc.contains("catalog")) + int(doc.contains("D1") || doc.contains("F") || doc.contains("D2")) +
                    int(doc.contains("T"));
  if (forms != 1) throw InvalidArgument("--input: give exactly one of {catalog, params}, {D1, F, D2} or {T}");
  job.source_label = src.input;
  if (doc.contains("catalog")) {
    if (!doc["catalog"].is_string()) throw InvalidArgument("catalog: expected a string");
    job.generator =
        make_named<double>(doc["catalog"].get<std::string>(), params_from_json(doc.value("params", json()))).generator;
  } else if (doc.contains("T")) {
    job.transfer = TransferMatrix<double>::from_full(json_io::matrix_from_json(doc["T"], "T"));
  } else {
    for (const char* key : {"D1", "F", "D2"})
      if (!doc.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
    job.generator = assemble_generator(json_io::matrix_from_json(doc["D1"], "D1"),
                                       json_io::matrix_from_json(doc["F"], "F"),
                                       json_io::matrix_from_json(doc["D2"], "D2"));
  }
}

TransferMatrix<double> transfer_of(const JobSpec& job) {
  return job.generator ? transfer_matrix(*job.generator) : *job.transfer;
}

// Symplectic and block residuals are quadratic in T; compare them against
// tol * max(1, max|T|)^2 so large but healthy transfer matrices still pass.
double quadratic_scale(const TransferMatrix<double>& t) {
  const double m = std::max(1.0, max_abs(t.full()));
  return m * m;
}

void print_matrix(std::ostream& out, const std::string& name, const MatrixXcd& m) {
  out << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::ostringstream cell;
      cell << std::setprecision(10) << m(i, j).real() << (m(i, j).imag() < 0 ? " - " : " + ")
           << std::abs(m(i, j).imag()) << "i";
      out << std::left << std::setw(34) << cell.str();
    }
    out << "\n";
  }
}

struct CheckRow {
  std::string name;
  std::string status;  // pass, fail, skipped
  double residual = 0;
  double tolerance = 0;
  std::string note;
};

void print_table(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << std::left << std::setw(16) << "check" << std::setw(12) << "residual" << std::setw(12) << "tolerance"
      << "verdict\n";
  for (const auto& r : rows) {
    const bool skipped = r.status == "skipped";
    out << std::left << std::setw(16) << r.name << std::setw(12) << (skipped ? "-" : sci(r.residual))
        << std::setw(12) << (skipped ? "-" : sci(r.tolerance)) << r.status;
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << "\n";
  }
}

json rows_to_json(const std::vector<CheckRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"name", r.name}, {"status", r.status}};
    if (r.status != "skipped") {
      j["residual"] = r.residual;
      j["tolerance"] = r.tolerance;
    }
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

int cmd_decompose(const JobSpec& job, std::ostream& out) {
  const auto t = transfer_of(job);
  const auto f = gauss_decompose(t);
  const double symp = symplectic_residual(t);
  const double block = block_relation_residual(t);
  const double recon = reconstruction_residual(t, f);
  if (job.format == OutputFormat::Json) {
    json j = json_io::to_json(f);
    j["source"] = job.source_label;
    j["T"] = json_io::to_json(t.full());
    j["residuals"] = {{"symplectic", symp},
                      {"block_relation", block},
                      {"reconstruct", recon},
                      {"W_asymmetry", f.W_asymmetry},
                      {"Z_asymmetry", f.Z_asymmetry}};
    out << j.dump(2) << "\n";
  } else {
    out << "source: " << job.source_label << "  (n = " << f.n() << ")\n";
    print_matrix(out, "W", f.W);
    print_matrix(out, "Y", f.Y);
    print_matrix(out, "Z", f.Z);
    out << "prefactor = " << std::setprecision(12) << f.prefactor.real() << (f.prefactor.imag() < 0 ? " - " : " + ")
        << std::abs(f.prefactor.imag()) << "i\n\n";
    print_table(out, {{"symplectic", "info", symp, job.tol, ""},
                      {"block_relation", "info", block, job.tol, ""},
                      {"reconstruct", "info", recon, job.tol, ""}});
  }
  return kPass;
}

int cmd_verify(const JobSpec& job, std::ostream& out) {
  const auto t = transfer_of(job);
  const double scale = quadratic_scale(t);
  DecomposeOptions opts;
  // Reconstruction round-off grows like eps * cond^2; refuse what cannot meet tol.
  opts.max_condition = std::sqrt(job.tol / std::numeric_limits<double>::epsilon());

  auto wants = [&](const std::string& name) {
    return std::find(job.checks.begin(), job.checks.end(), name) != job.checks.end();
  };
  std::optional<Factorization<double>> f;
  auto factorization = [&]() -> const Factorization<double>& {
    if (!f) f = gauss_decompose(t, opts);
    return *f;
  };

  std::vector<CheckRow> rows;
  auto add = [&](const std::string& name, double residual, double tol) {
    rows.push_back({name, residual <= tol ? "pass" : "fail", residual, tol, ""});
  };
  if (wants("symplectic")) add("symplectic", symplectic_residual(t), job.tol * scale);
  if (wants("block_relation")) add("block_relation", block_relation_residual(t), job.tol * scale);
  if (wants("reconstruct")) add("reconstruct", reconstruction_residual(t, factorization()), job.tol);
  if (wants("oracle")) {
    if (!job.generator) {
      rows.push_back({"oracle", "skipped", 0, 0, "needs a generator, input gave T"});
    } else {
      const auto vac = GaussianState<double>::vacuum(job.generator->n());
      const auto factored = apply_factorization(factorization(), vac);
      const auto flowed = evolve_generator(*job.generator, vac, job.steps);
      add("oracle", state_distance(factored, flowed), kOracleTol);
    }
  }
  if (wants("appendix")) {
    if (!job.generator) {
      rows.push_back({"appendix", "skipped", 0, 0, "needs a generator, input gave T"});
    } else {
      const auto v = v_ode_check(*job.generator, job.steps);
      add("appendix", std::abs(v.v_final - factorization().prefactor), kAppendixTol);
    }
  }
  const bool ok = std::none_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.status == "fail"; });
  if (job.format == OutputFormat::Json) {
    out << json{{"source", job.source_label}, {"checks", rows_to_json(rows)}, {"pass", ok}}.dump(2) << "\n";
  } else {
    out << "source: " << job.source_label << "\n";
    print_table(out, rows);
    out << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kPass : kVerificationFailed;
}

int cmd_reconstruct(const std::string& path, OutputFormat format, std::ostream& out) {
  const auto f = json_io::factorization_from_json(read_json_file(path));
  const auto t = reconstruct(f);
  if (format == OutputFormat::Json) {
    out << json{{"n", t.n()},
                {"T", json_io::to_json(t.full())},
                {"T11", json_io::to_json(t.T11)},
                {"T12", json_io::to_json(t.T12)},
                {"T21", json_io::to_json(t.T21)},
                {"T22", json_io::to_json(t.T22)},
                {"symplectic_residual", symplectic_residual(t)}}
               .dump(2)
        << "\n";
  } else {
    print_matrix(out, "T", t.full());
    out << "symplectic residual " << sci(symplectic_residual(t)) << "\n";
  }
  return kPass;
}

int cmd_catalog_list(OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const auto& e : catalog_entries()) {
      json params = json::array();
      for (const auto p : e.params) params.push_back(std::string(p));
      arr.push_back({{"name", std::string(e.name)}, {"params", params}});
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& e : catalog_entries()) {
      out << e.name << "(";
      for (std::size_t i = 0; i < e.params.size(); ++i) out << (i ? ", " : "") << e.params[i];
      out << ")\n";
    }
  }
  return kPass;
}

std::vector<std::string> parse_checks(const std::string& list) {
  if (list == "all") return all_checks();
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(all_checks().begin(), all_checks().end(), item) == all_checks().end())
      throw InvalidArgument("--checks: unknown check '" + item + "'");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw InvalidArgument("--checks: empty list");
  // Report in canonical order regardless of how they were listed.
  std::vector<std::string> ordered;
  for (const auto& name : all_checks())
    if (std::find(out.begin(), out.end(), name) != out.end()) ordered.push_back(name);
  return ordered;
}

double default_tolerance() {
  const char* env = std::getenv("EQO_DEFAULT_TOL");
  if (!env || !*env) return Tolerances{}.residual;
  const double v = parse_double(env, "EQO_DEFAULT_TOL");
  if (!(v > 0)) throw InvalidArgument("EQO_DEFAULT_TOL must be positive");
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reorder exponential quadratic operators in coordinate-momentum space", "eqo"};
  app.require_subcommand(1);

  SourceOptions src;
  std::string format = "json";
  std::string checks = "all";
  double tol = 0;
  int steps = 4000;
  bool appendix = false;
  std::string reconstruct_input;

  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--catalog", src.catalog, "Catalog operator name");
    cmd->add_option("--param", src.params, "Catalog parameter K=V (repeatable)");
    cmd->add_option("--input", src.input, "JSON file with {D1, F, D2}, {catalog, params} or {T}");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* decompose_cmd = app.add_subcommand("decompose", "Factor the operator into W, Y, Z and the prefactor");
  add_source(decompose_cmd);
  add_format(decompose_cmd);
  decompose_cmd->add_option("--tol", tol, "Residual tolerance shown in text reports");

  auto* verify_cmd = app.add_subcommand("verify", "Run residual, oracle and appendix checks");
  add_source(verify_cmd);
  add_format(verify_cmd);
  verify_cmd->add_option("--checks", checks, "Comma-separated subset of " + [] {
    std::string s;
    for (const auto& c : all_checks()) s += (s.empty() ? "" : ",") + c;
    return s;
  }() + ", or all");
  verify_cmd->add_flag("--appendix", appendix, "Add the appendix prefactor check");
  verify_cmd->add_option("--tol", tol, "Residual tolerance (default 1e-10 or EQO_DEFAULT_TOL)");
  verify_cmd->add_option("--steps", steps, "Integration steps for oracle and appendix checks")
      ->check(CLI::PositiveNumber);

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Rebuild T from an emitted factorization");
  reconstruct_cmd->add_option("--input", reconstruct_input, "Factorization JSON {W, Y, Z[, prefactor]}")->required();
  add_format(reconstruct_cmd);

  auto* catalog_cmd = app.add_subcommand("catalog", "Catalog operations");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "List catalog operators and their parameters");
  add_format(list_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kInputError;
  }

  const OutputFormat fmt = format == "text" ? OutputFormat::Text : OutputFormat::Json;
  try {
    if (list_cmd->parsed()) return cmd_catalog_list(fmt, out);
    if (reconstruct_cmd->parsed()) return cmd_reconstruct(reconstruct_input, fmt, out);

    JobSpec job;
    job.format = fmt;
    job.steps = steps;
    job.tol = tol > 0 ? tol : default_tolerance();
    resolve_source(src, job);
    if (decompose_cmd->parsed()) return cmd_decompose(job, out);

    job.checks = parse_checks(checks);
    if (appendix && std::find(job.checks.begin(), job.checks.end(), "appendix") == job.checks.end())
      job.checks = parse_checks([&] {
        std::string s = "appendix";
        for (const auto& c : job.checks) s += "," + c;
        return s;
      }());
    if (job.transfer && checks != "all") {
      for (const auto& c : job.checks)
        if (c == "oracle" || c == "appendix")
          throw InvalidArgument("--checks " + c + " needs a generator; the input only gives T");
    }
    return cmd_verify(job, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "decomposition error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace eqo::cli
