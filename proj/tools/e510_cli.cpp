#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "e510/certificate.hpp"
#include "e510/verma.hpp"

using namespace e510;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAnomaly = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Weight parse_weight(std::string s, bool require_dominant) {
  std::erase_if(s, [](char c) { return c == '[' || c == ']' || c == '(' || c == ')'; });
  auto parts = split(s, ',');
  if (parts.size() != 4) throw UsageError("weight must have 4 comma-separated entries: '" + s + "'");
  Weight w;
  for (int k = 0; k < 4; ++k) {
    try {
      std::size_t used = 0;
      w.c[k] = std::stoi(parts[k], &used);
      if (used != parts[k].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad weight entry '" + parts[k] + "'");
    }
  }
  if (require_dominant && !w.is_dominant()) throw UsageError("weight " + w.str() + " is not dominant");
  return w;
}

IndexTuple parse_tuple(const std::string& s) {
  IndexTuple out;
  if (s.empty()) return out;
  for (const auto& p : split(s, ',')) {
    if (p.size() != 2 || p[0] < '1' || p[0] > '5' || p[1] < '1' || p[1] > '5')
      throw UsageError("tuple entries must be two digits in 1..5: '" + p + "'");
    out.push_back({p[0] - '0', p[1] - '0'});
  }
  return out;
}

int resolve_threads(int t) {
  if (t > 0) return t;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fixed_width(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

std::string certificate_name(const Certificate& c, std::size_t k) {
  auto join = [](const Weight& w) {
    return std::to_string(w[0]) + "_" + std::to_string(w[1]) + "_" + std::to_string(w[2]) + "_" + std::to_string(w[3]);
  };
  return "mu_" + join(c.mu) + "-lambda_" + join(c.lambda) + "-d" + std::to_string(c.degree) + "-" +
         std::to_string(k) + ".json";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text << '\n';
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return Json::parse(f);
}

std::string leading_text(const UElement& lead, bool latex) { return latex ? to_latex(lead) : to_string(lead); }

// Certificates of one search, optionally written and re-verified from their text.
struct Emitted {
  std::vector<Json> certs;
  bool anomaly = false;
  bool verify_failed = false;
};

void emit(Emitted& out, const Certificate& c, const std::string& out_dir, bool verify, std::size_t k) {
  Json j = to_json(c);
  std::string text = j.dump(2);
  if (!out_dir.empty()) write_file(fs::path(out_dir) / certificate_name(c, k), text);
  if (c.family == "ANOMALY") out.anomaly = true;
  if (verify) {
    auto res = verify_certificate(Json::parse(text));
    if (!res.ok) {
      out.verify_failed = true;
      for (const auto& p : res.problems) std::cerr << "verify: " << certificate_name(c, k) << ": " << p << '\n';
    }
  }
  out.certs.push_back(std::move(j));
}

int finish(const Emitted& e) {
  if (e.verify_failed) return kExitVerify;
  if (e.anomaly) return kExitAnomaly;
  return kExitOk;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string checks_text(const Certificate& c) {
  std::string eq = c.equations ? yes_no(*c.equations) : "n/a";
  return "l0_highest " + yes_no(c.checks.l0_highest) + ", x5d45 " + yes_no(c.checks.x5d45) + ", full_l1 " +
         yes_no(c.checks.full_l1) + ", equations " + eq;
}

// ---------------------------------------------------------------- commands

int cmd_omega(const std::string& text, bool json, bool latex) {
  IndexTuple I = parse_tuple(text);
  UElement w = omega(I);
  if (json) {
    std::cout << Json{{"tuple", text}, {"omega", to_json(w)}}.dump(2) << '\n';
  } else {
    std::cout << (latex ? to_latex(w) : to_string(w)) << '\n';
  }
  return kExitOk;
}

int cmd_dim_u(int d, bool json) {
  if (d < 0) throw UsageError("degree must be nonnegative");
  std::size_t pbw = pbw_dimension(d);
  const OmegaBasis& b = omega_basis_cached(d);
  std::size_t r = rank(b.change_of_basis());
  bool invertible = r == pbw && b.labels.size() == pbw;
  if (json) {
    std::cout << Json{{"degree", d}, {"pbw_dimension", pbw}, {"omega_basis_size", b.labels.size()},
                      {"rank", r}, {"invertible", invertible}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "degree " << d << ": dim (U_-)_d = " << pbw << ", omega basis " << b.labels.size() << ", rank " << r
              << (invertible ? ", invertible" : ", NOT invertible") << '\n';
  }
  return invertible ? kExitOk : kExitVerify;
}

int cmd_irrep(const Weight& lambda, bool json) {
  auto M = irreducible(lambda);
  std::uint64_t weyl = weyl_dimension(lambda);
  std::string hw = to_string(TensorVector(highest_weight_monomial(lambda), Scalar(1)));
  if (json) {
    Json spaces = Json::array();
    for (const auto& [w, idx] : M->spaces) spaces.push_back(Json{{"weight", to_json(w)}, {"multiplicity", idx.size()}});
    std::cout << Json{{"lambda", to_json(lambda)}, {"dimension", M->dim()}, {"weyl_dimension", weyl},
                      {"highest_weight_vector", hw}, {"weights", spaces}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "F" << lambda.str() << ": dimension " << M->dim() << " (Weyl formula " << weyl << "), "
              << M->spaces.size() << " distinct weights\n";
    std::cout << "highest weight vector: " << hw << '\n';
  }
  return M->dim() == weyl ? kExitOk : kExitVerify;
}

int cmd_singular(const Weight& mu, int d, const std::string& out_dir, bool json, bool latex, bool verify,
                 int threads) {
  if (d < 1) throw UsageError("degree must be at least 1");
  auto results = singular_vectors(mu, d, threads);
  Emitted e;
  std::size_t k = 0;
  std::vector<Certificate> certs;
  for (const auto& r : results)
    for (const auto& w : r.basis) certs.push_back(make_certificate(mu, r.lambda, w));
  for (const auto& c : certs) emit(e, c, out_dir, verify, k++);
  if (json) {
    std::cout << Json(e.certs).dump(2) << '\n';
  } else {
    std::cout << "M" << mu.str() << ", degree " << d << ": " << certs.size() << " singular vector(s)\n";
    for (const auto& r : results) {
      if (r.basis.size() > 1)
        std::cout << "  lambda " << r.lambda.str() << ": solution space of dimension " << r.basis.size()
                  << " (ANOMALY)\n";
    }
    for (const auto& c : certs) {
      std::cout << "  lambda " << c.lambda.str() << "  " << c.family << "  leading " << leading_text(c.leading, latex)
                << '\n';
      std::cout << "    " << c.vector.str() << '\n';
      std::cout << "    checks: " << checks_text(c) << '\n';
    }
    if (!out_dir.empty()) std::cout << "certificates written to " << out_dir << '\n';
  }
  for (const auto& r : results)
    if (r.basis.size() > 1 && d <= 3) e.anomaly = true;
  return finish(e);
}

int cmd_classify(int d, int max_entry, const std::string& out_dir, bool json, bool latex, bool verify, int threads) {
  if (d < 1) throw UsageError("degree must be at least 1");
  if (max_entry < 0) throw UsageError("max-entry must be nonnegative");
  auto rows = classify(d, max_entry, threads);
  Emitted e;
  std::size_t k = 0;
  Json table = Json::array();
  if (!json) {
    std::cout << fixed_width("mu", 12) << fixed_width("lambda", 12) << fixed_width("dim", 5) << fixed_width("family", 14)
              << "leading term\n";
  }
  for (const auto& row : rows) {
    if (row.label == "ANOMALY") e.anomaly = true;
    std::string lead;
    for (const auto& w : row.vectors) {
      Certificate c = make_certificate(row.mu, row.lambda, w);
      if (lead.empty()) lead = leading_text(c.leading, latex);
      emit(e, c, out_dir, verify, k++);
    }
    table.push_back(Json{{"mu", to_json(row.mu)},
                         {"lambda", to_json(row.lambda)},
                         {"degree", row.degree},
                         {"dimension", row.dimension},
                         {"family", row.label}});
    if (!json) {
      std::cout << fixed_width(row.mu.str(), 12) << fixed_width(row.lambda.str(), 12)
                << fixed_width(std::to_string(row.dimension), 5) << fixed_width(row.label, 14) << lead << '\n';
    }
  }
  if (json) {
    std::cout << Json{{"degree", d}, {"max_entry", max_entry}, {"rows", table}, {"certificates", e.certs}}.dump(2)
              << '\n';
  } else {
    std::cout << rows.size() << " hit(s)" << (e.anomaly ? ", ANOMALY present" : ", no anomalies") << '\n';
  }
  return finish(e);
}

Json morphism_summary(const MorphismData& phi, const std::string& name, bool latex) {
  Json j{{"name", name}, {"lambda", to_json(phi.lambda)}, {"mu", to_json(phi.mu)}, {"degree", phi.degree},
         {"zero", phi.is_zero()}};
  if (phi.is_zero()) return j;
  VermaElement w = phi.image(phi.source->hw_index);
  UElement lead = leading_u_part(w);
  j["leading_term"] = to_json(lead);
  j["leading_text"] = leading_text(lead, latex);
  std::optional<Family> f;
  if (lead.nnz() == 1) f = family_label(phi.mu, phi.lambda, phi.degree, UElement(lead.front().first, Scalar(1)));
  j["family"] = f ? family_name(*f) : (phi.degree > 3 ? "exploratory" : "ANOMALY");
  CheckResult cm = check_morphism(phi);
  j["checks"] = Json{{"morphism", cm.ok}};
  if (phi.degree >= 1 && phi.degree <= 3) j["checks"]["equations"] = verify_degree_equations(phi).ok();
  if (!cm.ok) j["diagnostic"] = cm.diagnostic;
  return j;
}

void print_summary(const Json& j) {
  std::cout << j["name"].get<std::string>() << ": M" << weight_from_json(j["lambda"]).str() << " -> M"
            << weight_from_json(j["mu"]).str() << ", degree " << j["degree"].get<int>();
  if (j["zero"].get<bool>()) {
    std::cout << ", zero\n";
    return;
  }
  std::cout << ", nonzero\n  leading term " << j["leading_text"].get<std::string>() << " (" << j["family"].get<std::string>()
            << ")\n  morphism check " << yes_no(j["checks"]["morphism"].get<bool>());
  if (j["checks"].contains("equations")) std::cout << ", equations " << yes_no(j["checks"]["equations"].get<bool>());
  std::cout << '\n';
}

bool summary_ok(const Json& j) {
  if (j["zero"].get<bool>()) return true;
  bool ok = j["checks"]["morphism"].get<bool>();
  if (j["checks"].contains("equations")) ok = ok && j["checks"]["equations"].get<bool>();
  return ok;
}

void check_chain(const std::string& chain) {
  if (chain.empty()) throw UsageError("empty chain");
  for (char c : chain)
    if (c != 'A' && c != 'B' && c != 'C') throw UsageError("chain letters must be A, B or C");
}

int cmd_compose(const std::string& chain, const Weight& lambda, bool json, bool latex) {
  check_chain(chain);
  MorphismData phi = nabla_chain(chain, lambda);
  Json j = morphism_summary(phi, "nabla_" + chain, latex);
  if (json) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_summary(j);
  }
  return summary_ok(j) ? kExitOk : kExitVerify;
}

int cmd_dual(const std::string& chain, const Weight& lambda, bool json, bool latex) {
  check_chain(chain);
  MorphismData phi = nabla_chain(chain, lambda);
  if (phi.is_zero()) throw UsageError("nabla_" + chain + " vanishes on M" + lambda.str());
  MorphismData psi = dual_morphism(phi);
  MorphismData back = dual_morphism(psi);
  Json j = morphism_summary(psi, "dual of nabla_" + chain, latex);
  UElement lead0 = leading_u_part(phi.image(phi.source->hw_index));
  UElement lead2 = leading_u_part(back.image(back.source->hw_index));
  bool involution = back.lambda == phi.lambda && back.mu == phi.mu && lead0 == lead2;
  j["double_dual_matches"] = involution;
  if (phi.degree > 3) j["conjectural"] = true;
  if (json) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_summary(j);
    std::cout << "  double dual returns the original: " << yes_no(involution) << '\n';
    if (phi.degree > 3) std::cout << "  degree above 3: duality is not established here\n";
  }
  return summary_ok(j) && involution ? kExitOk : kExitVerify;
}

int cmd_verify(const std::vector<std::string>& files, bool json) {
  bool all_ok = true;
  Json report = Json::array();
  for (const auto& path : files) {
    std::vector<Json> certs;
    try {
      Json j = read_json_file(path);
      if (j.is_array()) {
        for (auto& c : j) certs.push_back(c);
      } else if (j.is_object() && j.contains("certificates")) {
        for (auto& c : j["certificates"]) certs.push_back(c);
      } else {
        certs.push_back(j);
      }
    } catch (const std::exception& e) {
      all_ok = false;
      report.push_back(Json{{"file", path}, {"ok", false}, {"problems", {e.what()}}});
      if (!json) std::cout << path << ": FAIL (" << e.what() << ")\n";
      continue;
    }
    for (std::size_t k = 0; k < certs.size(); ++k) {
      auto res = verify_certificate(certs[k]);
      all_ok = all_ok && res.ok;
      report.push_back(Json{{"file", path}, {"index", k}, {"ok", res.ok}, {"problems", res.problems}});
      if (!json) {
        std::cout << path << (certs.size() > 1 ? "[" + std::to_string(k) + "]" : "") << ": "
                  << (res.ok ? "OK" : "FAIL") << '\n';
        for (const auto& p : res.problems) std::cout << "  " << p << '\n';
      }
    }
  }
  if (json) std::cout << report.dump(2) << '\n';
  return all_ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular vectors and morphisms of Verma modules over E(5,10)"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string mu_s, lambda_s, out_dir, tuple, chain;
  int degree = 1, max_entry = 1, threads = 1;
  bool json = false, latex = false, verify = false;
  std::vector<std::string> files;

  auto add_output = [&](CLI::App* c) {
    c->add_flag("--json", json, "Machine-readable output");
    c->add_flag("--latex", latex, "LaTeX rendering of expressions");
  };
  auto add_search = [&](CLI::App* c) {
    c->add_option("--out", out_dir, "Directory for certificate files");
    c->add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    c->add_flag("--verify", verify, "Re-read and re-verify every certificate");
  };

  auto* omega_cmd = app.add_subcommand("omega", "Expand omega_I in PBW normal form");
  omega_cmd->add_option("tuple", tuple, "Comma-joined pairs, e.g. 21,13,45,25")->required();
  add_output(omega_cmd);

  auto* dimu_cmd = app.add_subcommand("dim-u", "Dimension of (U_-)_d and invertibility of the omega basis");
  dimu_cmd->add_option("--degree", degree, "Degree d")->required();
  add_output(dimu_cmd);

  auto* irrep_cmd = app.add_subcommand("irrep", "Build the irreducible module F(lambda)");
  irrep_cmd->add_option("--lambda", lambda_s, "Highest weight a,b,c,d")->required();
  irrep_cmd->add_flag("--json", json, "Machine-readable output");

  auto* sing_cmd = app.add_subcommand("singular", "Singular vectors of degree d in M(mu)");
  sing_cmd->add_option("--mu", mu_s, "Highest weight a,b,c,d")->required();
  sing_cmd->add_option("--degree", degree, "Degree d")->required();
  add_output(sing_cmd);
  add_search(sing_cmd);

  auto* cls_cmd = app.add_subcommand("classify", "Sweep all dominant mu with entries <= max-entry");
  cls_cmd->add_option("--degree", degree, "Degree d")->required();
  cls_cmd->add_option("--max-entry", max_entry, "Largest weight entry")->required();
  add_output(cls_cmd);
  add_search(cls_cmd);

  auto* comp_cmd = app.add_subcommand("compose", "Composite of A/B/C steps applied right to left");
  comp_cmd->add_option("chain", chain, "Steps, e.g. CBA")->required();
  comp_cmd->add_option("--lambda", lambda_s, "Source highest weight")->required();
  add_output(comp_cmd);

  auto* dual_cmd = app.add_subcommand("dual", "Dual morphism of a composite");
  dual_cmd->add_option("chain", chain, "Steps, e.g. CBA")->required();
  dual_cmd->add_option("--lambda", lambda_s, "Source highest weight")->required();
  add_output(dual_cmd);

  auto* ver_cmd = app.add_subcommand("verify", "Re-verify certificate files");
  ver_cmd->add_option("files", files, "Certificate files")->required();
  ver_cmd->add_flag("--json", json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    int nthreads = resolve_threads(threads);
    if (*omega_cmd) return cmd_omega(tuple, json, latex);
    if (*dimu_cmd) return cmd_dim_u(degree, json);
    if (*irrep_cmd) return cmd_irrep(parse_weight(lambda_s, true), json);
    if (!out_dir.empty()) fs::create_directories(out_dir);
    if (*sing_cmd) return cmd_singular(parse_weight(mu_s, true), degree, out_dir, json, latex, verify, nthreads);
    if (*cls_cmd) return cmd_classify(degree, max_entry, out_dir, json, latex, verify, nthreads);
    if (*comp_cmd) return cmd_compose(chain, parse_weight(lambda_s, true), json, latex);
    if (*dual_cmd) return cmd_dual(chain, parse_weight(lambda_s, true), json, latex);
    if (*ver_cmd) return cmd_verify(files, json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    // internal consistency failures
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
