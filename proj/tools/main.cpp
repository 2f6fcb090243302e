// command line front end: theta, escalate, certify, appendix-check,
// critical-check, local, sweep
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "oddrep/analytic.hpp"
#include "oddrep/escalation.hpp"
#include "oddrep/local.hpp"
#include "oddrep/theta.hpp"
#include "oddrep/verify.hpp"

using namespace oddrep;

namespace {

QuadraticForm form_from_options(const std::string& inline_form, const std::string& file) {
  if (!inline_form.empty()) return parse_form(inline_form);
  if (!file.empty()) {
    std::ifstream is(file);
    if (!is) throw Error(ErrorCode::ParseError, "cannot read " + file);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_form(text);
  }
  throw Error(ErrorCode::ParseError, "provide --form or --form-file");
}

int emit_error(const Error& e) {
  nlohmann::json j;
  j["error"] = error_code_name(e.code);
  j["message"] = e.what();
  std::cout << j.dump() << "\n";
  switch (e.code) {
    case ErrorCode::Unresolvable: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive-definite quadratic forms: which odd integers are represented"};
  app.require_subcommand(1);

  std::string form_text, form_file, out_path, checkpoint, regular_db_path;
  i64 env_budget = 0;
  if (const char* b = std::getenv("ODDREP_BUDGET_SECONDS")) env_budget = std::atoll(b);
  (void)env_budget;

  // ---- theta ----
  auto* c_theta = app.add_subcommand("theta", "theta series coefficients");
  i64 theta_B = 20;
  c_theta->add_option("--form", form_text, "polynomial or JSON gram");
  c_theta->add_option("--form-file", form_file);
  c_theta->add_option("-B,--bound", theta_B, "precision");

  // ---- escalate ----
  auto* c_esc = app.add_subcommand("escalate", "build the escalator tree");
  int esc_dim = 3;
  i64 esc_bound = 10000;
  std::string esc_out, esc_summary;
  c_esc->add_option("--max-dim", esc_dim);
  c_esc->add_option("--node-bound", esc_bound, "per-node universality bound");
  c_esc->add_option("--checkpoint", checkpoint, "JSONL checkpoint path (resumable)");
  c_esc->add_option("-o,--output", esc_out, "JSONL tree output");
  c_esc->add_option("--summary", esc_summary, "CSV layer summary path");

  // ---- certify ----
  auto* c_cert = app.add_subcommand("certify", "certify odd-universality of a form");
  bool cert_full_sweep = false;
  i64 cert_interval = 0;
  c_cert->add_option("--form", form_text);
  c_cert->add_option("--form-file", form_file);
  c_cert->add_flag("--full-sweep", cert_full_sweep, "run the complete candidate sweep (batch)");
  c_cert->add_option("--fallback-interval", cert_interval);
  c_cert->add_option("--regular-db", regular_db_path, "regular ternary list (JSON)");
  c_cert->add_option("-o,--output", out_path);

  // ---- appendix-check ----
  auto* c_app = app.add_subcommand("appendix-check", "verify the known truant table");
  i64 app_bound = 1024;
  c_app->add_option("--bound", app_bound);

  // ---- critical-check ----
  auto* c_crit = app.add_subcommand("critical-check",
                                    "verify the padded form misses exactly its truant");
  i64 crit_bound = 1000;
  c_crit->add_option("--form", form_text);
  c_crit->add_option("--form-file", form_file);
  c_crit->add_option("--bound", crit_bound);

  // ---- local ----
  auto* c_local = app.add_subcommand("local", "local densities and invariants");
  i64 local_n = 1;
  std::string local_csv;
  c_local->add_option("--form", form_text);
  c_local->add_option("--form-file", form_file);
  c_local->add_option("-n", local_n);
  c_local->add_option("--csv", local_csv, "density audit rows n <= bound");

  // ---- sweep ----
  auto* c_sweep = app.add_subcommand("sweep", "interval representation check");
  i64 sweep_lo = 1, sweep_hi = 10000;
  int jobs = 1;
  c_sweep->add_option("--form", form_text);
  c_sweep->add_option("--form-file", form_file);
  c_sweep->add_option("--lo", sweep_lo);
  c_sweep->add_option("--hi", sweep_hi);
  c_sweep->add_option("--jobs", jobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_theta) {
      QuadraticForm q = form_from_options(form_text, form_file);
      ThetaSeries t = theta_series(q, theta_B);
      for (i64 n = 0; n <= theta_B; ++n) std::cout << (n ? " " : "") << t[n];
      std::cout << "\n";
      return 0;
    }
    if (*c_esc) {
      BuildOptions opt;
      opt.node_bound = esc_bound;
      opt.checkpoint_path = checkpoint;
      EscalationTree tree;
      if (!checkpoint.empty()) {
        auto loaded = load_tree(checkpoint);
        if (loaded && static_cast<int>(loaded->layers.size()) > esc_dim) {
          tree = std::move(*loaded);
        } else {
          tree = build_tree(TargetSet::odds(), esc_dim, opt);
        }
      } else {
        tree = build_tree(TargetSet::odds(), esc_dim, opt);
      }
      std::string counts;
      for (size_t d = 0; d < tree.layers.size(); ++d)
        counts += (d ? "," : "") + std::to_string(tree.layer_count(static_cast<int>(d)));
      std::cout << counts << "\n";
      if (!esc_out.empty()) save_tree(tree, esc_out);
      if (!esc_summary.empty()) {
        std::ofstream os(esc_summary);
        os << "dim,classes,merged\n";
        for (size_t d = 0; d < tree.layers.size(); ++d)
          os << d << "," << tree.layer_count(static_cast<int>(d)) << ","
             << tree.merged_count(static_cast<int>(d)) << "\n";
      }
      return 0;
    }
    if (*c_cert) {
      QuadraticForm q = form_from_options(form_text, form_file);
      ReportConfig cfg;
      static EscalationTree ternary_tree = build_tree(TargetSet::odds(), 3);
      cfg.ternary_db = kaplansky_candidates(ternary_tree, i64(1) << 14);
      cfg.regular_db =
          regular_db_path.empty() ? RegularTernaryDB::builtin() : RegularTernaryDB::load(regular_db_path);
      cfg.m3.full_sweep = cert_full_sweep;
      cfg.fallback_interval = cert_interval;
      ExceptionReport rep = report(q, cfg);
      nlohmann::json j;
      j["schema"] = 1;
      j["form"] = q.gram_matrix();
      j["method"] = rep.method;
      j["complete"] = rep.complete;
      j["certified_through"] = rep.certified_through;
      j["exceptions"] = rep.exceptions;
      j["note"] = rep.note;
      if (rep.method == "method3") {
        Method3Options m3o = cfg.m3;
        Method3Result res = method3(q, m3o);
        j["certificate"] = nlohmann::json::parse(res.certificate.to_json());
        j["max_candidate"] = res.stats.max_candidate;
        j["max_prime_factors"] = res.stats.max_prime_factors;
      }
      std::string line = j.dump();
      std::cout << line << "\n";
      if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::app);
        os << line << "\n";
      }
      bool universal = rep.complete && rep.exceptions.empty();
      return universal ? 0 : (rep.complete ? 1 : 0);
    }
    if (*c_app) {
      int failures = 0;
      for (const auto& row : truant_table()) {
        QuadraticForm q =
            row.form[0] ? parse_form(row.form) : QuadraticForm::zero();
        TruantResult tr = truant(q, TargetSet::odds(), app_bound);
        bool ok = tr.truant && *tr.truant == row.truant;
        if (!ok) ++failures;
        std::printf("%-50s stated %-4lld computed %-4lld %s\n",
                    row.form[0] ? row.form : "(empty)", static_cast<long long>(row.truant),
                    static_cast<long long>(tr.truant.value_or(-1)), ok ? "ok" : "FAIL");
      }
      return failures == 0 ? 0 : 1;
    }
    if (*c_crit) {
      QuadraticForm q = form_text.empty() && form_file.empty()
                            ? QuadraticForm::zero()
                            : form_from_options(form_text, form_file);
      TruantResult tr = truant(q, TargetSet::odds(), 10000);
      if (!tr.truant) throw Error(ErrorCode::Unresolvable, "form has no truant below 10^4");
      i64 t = *tr.truant;
      // Q' = Q + (t+1)(y^2+z^2+w^2+v^2) + (2t+1) u^2
      int n = q.rank();
      std::vector<std::vector<i64>> g(n + 5, std::vector<i64>(n + 5, 0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = q.gram(i, j);
      for (int i = 0; i < 4; ++i) g[n + i][n + i] = 2 * (t + 1);
      g[n + 4][n + 4] = 2 * (2 * t + 1);
      QuadraticForm padded = QuadraticForm::from_gram(std::move(g));
      ThetaSeries th = theta_series(padded, crit_bound);
      std::vector<i64> missing;
      for (i64 m = 1; m <= crit_bound; m += 2)
        if (th[m] == 0) missing.push_back(m);
      nlohmann::json j;
      j["truant"] = t;
      j["bound"] = crit_bound;
      j["missing_odds"] = missing;
      j["unique_exception"] = missing.size() == 1 && missing[0] == t;
      std::cout << j.dump() << "\n";
      return (missing.size() == 1 && missing[0] == t) ? 0 : 1;
    }
    if (*c_local) {
      QuadraticForm q = form_from_options(form_text, form_file);
      LocalDensities ld(q);
      nlohmann::json j;
      j["disc"] = q.disc64();
      j["level"] = q.level();
      nlohmann::json dens = nlohmann::json::array();
      for (auto& [p, e] : factorize(to_i64(2 * q.disc()))) {
        (void)e;
        Rat b = ld.density(p, local_n);
        nlohmann::json row;
        row["p"] = p;
        row["num"] = boost::multiprecision::numerator(b).convert_to<i64>();
        row["den"] = boost::multiprecision::denominator(b).convert_to<i64>();
        row["epsilon"] = epsilon_invariant(q, p);
        row["anisotropic"] = is_anisotropic(q, p);
        dens.push_back(row);
      }
      j["n"] = local_n;
      j["densities"] = dens;
      if (q.rank() == 4) {
        Rat ae = ld.eisenstein_rational(local_n);
        j["eisenstein_num"] = boost::multiprecision::numerator(ae).convert_to<i64>();
        j["eisenstein_den"] = boost::multiprecision::denominator(ae).convert_to<i64>();
      }
      std::cout << j.dump() << "\n";
      if (!local_csv.empty()) {
        std::ofstream os(local_csv);
        os << "n,place,numerator,denominator\n";
        for (i64 m = 1; m <= local_n; ++m)
          for (auto& [p, e] : factorize(to_i64(2 * q.disc()))) {
            (void)e;
            Rat b = ld.density(p, m);
            os << m << "," << p << "," << boost::multiprecision::numerator(b) << ","
               << boost::multiprecision::denominator(b) << "\n";
          }
      }
      return 0;
    }
    if (*c_sweep) {
      QuadraticForm q = form_from_options(form_text, form_file);
      ExceptionReport rep = check_interval(q, sweep_lo, sweep_hi, TargetSet::odds());
      nlohmann::json j;
      j["method"] = rep.method;
      j["lo"] = sweep_lo;
      j["hi"] = sweep_hi;
      j["exceptions"] = rep.exceptions;
      j["checked"] = rep.candidates_checked;
      j["cover_misses"] = rep.cover_misses;
      std::cout << j.dump() << "\n";
      return rep.exceptions.empty() ? 0 : 1;
    }
  } catch (const Error& e) {
    return emit_error(e);
  } catch (const std::exception& e) {
    std::cout << "{\"error\":\"Internal\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
  return 0;
}
