#include "mbqes/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mbqes/bethe.hpp"
#include "mbqes/diffop.hpp"
#include "mbqes/fock.hpp"
#include "mbqes/models.hpp"
#include "mbqes/polyalg.hpp"

namespace mbqes::cli {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational rational_field(const std::string& field, std::string_view text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

std::vector<Rational> rational_list(const std::string& field, std::string_view text) {
  try {
    return parse_rational_list(text);
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

long integer_field(const std::string& field, std::string_view text) {
  const Rational x = rational_field(field, text);
  if (!is_integer(x)) throw ConfigError(field, "expected an integer, got '" + std::string(text) + "'");
  return to_long(x);
}

std::vector<long> integer_list(const std::string& field, std::string_view text) {
  std::vector<long> out;
  for (const auto& item : split(text, ',')) out.push_back(integer_field(field, item));
  return out;
}

ModelSpec blank_model(const std::string& field, long r, long s, const std::vector<long>& k) {
  if (r < 1) throw ConfigError(field + ".r", "must be >= 1");
  if (s < 1) throw ConfigError(field + ".s", "must be >= 1");
  if (static_cast<long>(k.size()) != r + s) {
    throw ConfigError(field + ".k", "needs r+s = " + std::to_string(r + s) + " entries, got " + std::to_string(k.size()));
  }
  std::vector<int> kk;
  for (long x : k) {
    if (x < 1 || x > 64) throw ConfigError(field + ".k", "entries must lie in 1..64");
    kk.push_back(static_cast<int>(x));
  }
  return ModelSpec::zero(static_cast<int>(r), static_cast<int>(s), kk);
}

void set_quadratic_entry(ModelSpec& model, const std::string& field, std::string_view index, const Rational& value) {
  const auto parts = split(index, '.');
  if (parts.size() != 2) throw ConfigError(field, "expected indices i.j, got '" + std::string(index) + "'");
  const long i = integer_field(field, parts[0]);
  const long j = integer_field(field, parts[1]);
  if (i < 1 || j < 1 || i > model.modes() || j > model.modes()) {
    throw ConfigError(field, "indices must lie in 1.." + std::to_string(model.modes()));
  }
  model.quadratic(static_cast<int>(i - 1), static_cast<int>(j - 1)) = value;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no), "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no), "empty key");
    if (!out.emplace(key, trim(std::string_view(line).substr(eq + 1))).second) {
      throw ConfigError(key, "given more than once");
    }
  }
  return out;
}

void apply_quadratic(ModelSpec& model, std::string_view text) {
  const std::string field = "--wq";
  const std::string t = trim(text);
  if (t == "zero") {
    std::fill(model.wq.begin(), model.wq.end(), Rational(0));
    return;
  }
  if (t.find('=') != std::string::npos) {
    for (const auto& item : split(t, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError(field, "expected i.j=value, got '" + item + "'");
      set_quadratic_entry(model, field, trim(std::string_view(item).substr(0, eq)),
                          rational_field(field, trim(std::string_view(item).substr(eq + 1))));
    }
    return;
  }
  auto values = rational_list(field, t);
  if (values.size() != model.wq.size()) {
    throw ConfigError(field, "needs the " + std::to_string(model.wq.size()) + " upper-triangle entries, got " +
                                 std::to_string(values.size()));
  }
  model.wq = std::move(values);
}

ModelSpec model_from_config(const std::map<std::string, std::string>& entries) {
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError(key, "missing");
    return it->second;
  };
  ModelSpec model = blank_model("model", integer_field("model.r", need("model.r")),
                                integer_field("model.s", need("model.s")), integer_list("model.k", need("model.k")));
  for (const auto& [key, value] : entries) {
    if (key == "model.r" || key == "model.s" || key == "model.k") continue;
    if (key == "model.w") {
      auto w = rational_list(key, value);
      if (w.size() != model.w.size()) {
        throw ConfigError(key, "needs r+s = " + std::to_string(model.w.size()) + " entries, got " + std::to_string(w.size()));
      }
      model.w = std::move(w);
    } else if (key == "model.g") {
      model.g = rational_field(key, value);
    } else if (key == "model.wq") {
      try {
        apply_quadratic(model, value);
      } catch (const ConfigError& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key.rfind("model.wq.", 0) == 0) {
      set_quadratic_entry(model, key, std::string_view(key).substr(9), rational_field(key, value));
    } else if (key.rfind("sector.", 0) != 0) {
      throw ConfigError(key, "unknown key");
    }
  }
  return model;
}

namespace {

struct Options {
  std::string preset;
  std::string config;
  long r = 0;
  long s = 0;
  std::string k;
  std::string w;
  std::string wq;
  std::string g;
  std::string occ;
  std::string kappa;
  std::string l;
  std::string q;
  double tol = 1e-8;
  int max_iter = 50;
  std::uint64_t seed = 0;
  bool direct = false;
  int starts = 64;
  std::string out;
  std::string format = "csv";
  std::string g_range;
  std::string param;
  std::string range;
  int threads = 1;
  int kmax = 4;
  int trunc = 0;
  std::string preset_case;
  int draws = 50;
  bool dump_diffop = false;
};

struct Problem {
  ModelSpec model;
  Sector sector;
};

ModelSpec resolve_model(const Options& o, bool inline_given, std::optional<std::string>& config_occ) {
  const int sources = (o.preset.empty() ? 0 : 1) + (o.config.empty() ? 0 : 1) + (inline_given ? 1 : 0);
  if (sources != 1) throw ConfigError("model", "give exactly one of --preset, --config or --r/--s/--k");
  ModelSpec model;
  if (!o.preset.empty()) {
    try {
      model = preset(parse_preset(o.preset));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--preset", e.what());
    }
  } else if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("--config", "cannot read '" + o.config + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto entries = parse_config(buf.str());
    model = model_from_config(entries);
    if (const auto it = entries.find("sector.occ"); it != entries.end()) config_occ = it->second;
    for (const auto& [key, value] : entries) {
      if (key.rfind("sector.", 0) == 0 && key != "sector.occ") throw ConfigError(key, "unknown key");
    }
  } else {
    if (o.r == 0 || o.s == 0 || o.k.empty()) throw ConfigError("--r/--s/--k", "inline models need all three");
    model = blank_model("--", o.r, o.s, integer_list("--k", o.k));
  }
  if (!o.w.empty()) {
    auto w = rational_list("--w", o.w);
    if (w.size() != model.w.size()) {
      throw ConfigError("--w", "needs r+s = " + std::to_string(model.w.size()) + " entries, got " + std::to_string(w.size()));
    }
    model.w = std::move(w);
  }
  if (!o.wq.empty()) apply_quadratic(model, o.wq);
  if (!o.g.empty()) model.g = rational_field("--g", o.g);
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  return model;
}

Sector resolve_sector(const Options& o, const ModelSpec& model, const std::optional<std::string>& config_occ) {
  const bool labels = !o.kappa.empty() || !o.l.empty() || !o.q.empty();
  std::string occ_text = o.occ;
  std::string occ_field = "--occ";
  if (occ_text.empty() && config_occ && !labels) {
    occ_text = *config_occ;
    occ_field = "sector.occ";
  }
  if (!occ_text.empty() && labels) throw ConfigError("sector", "give either --occ or --kappa/--l/--q, not both");
  if (!occ_text.empty()) {
    const auto occ = integer_list(occ_field, occ_text);
    if (static_cast<int>(occ.size()) != model.modes()) {
      throw ConfigError(occ_field, "needs r+s = " + std::to_string(model.modes()) + " entries, got " + std::to_string(occ.size()));
    }
    if (std::any_of(occ.begin(), occ.end(), [](long m) { return m < 0; })) throw ConfigError(occ_field, "occupations must be >= 0");
    return sector_from_occupations(model, occ);
  }
  if (!labels) throw ConfigError("sector", "give --occ or --kappa/--l/--q");
  if (o.kappa.empty() || o.q.empty()) throw ConfigError("--kappa/--q", "label sectors need --kappa and --q");
  const auto q = rational_list("--q", o.q);
  const auto l = o.l.empty() ? std::vector<Rational>{} : rational_list("--l", o.l);
  if (static_cast<int>(q.size()) != model.modes()) throw ConfigError("--q", "needs r+s values");
  if (static_cast<int>(l.size()) != model.modes() - 2) throw ConfigError("--l", "needs r+s-2 values");
  const auto r = static_cast<std::ptrdiff_t>(model.r);
  try {
    return sector_from_labels(model, {q.begin(), q.begin() + r}, {q.begin() + r, q.end()}, {l.begin(), l.begin() + (r - 1)},
                              {l.begin() + (r - 1), l.end()}, rational_field("--kappa", o.kappa));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sector", e.what());
  }
}

SolverConfig solver_config(const Options& o) {
  if (!(o.tol > 0)) throw ConfigError("--tol", "must be positive");
  if (o.max_iter < 1) throw ConfigError("--max-iter", "must be >= 1");
  if (o.starts < 1) throw ConfigError("--starts", "must be >= 1");
  SolverConfig c;
  c.max_iter = o.max_iter;
  c.seed = o.seed;
  c.direct = o.direct;
  c.starts = o.starts;
  c.energy_tol = o.tol;
  return c;
}

bool text_format(const Options& o) {
  if (o.format == "csv") return false;
  if (o.format == "text") return true;
  throw ConfigError("--format", "must be csv or text");
}

int cmd_solve(const Options& o, const Problem& p, std::ostream& os) {
  const SolverConfig cfg = solver_config(o);
  const bool text = text_format(o);
  const ValidationReport rep = cross_validate(p.model, p.sector, cfg.energy_tol, cfg);
  if (text) {
    os << "sector " << rep.sector_summary << "\n";
    os << "dim " << rep.dim << "\n";
    os << "tolerance " << num(rep.tolerance) << "\n";
    os << "max_energy_error " << num(rep.max_energy_error) << "\n";
    if (cfg.direct) os << "direct_found " << rep.direct_found << "\ndirect_unmatched " << rep.direct_unmatched << "\n";
    os << "status " << (rep.pass ? "pass" : "fail") << "\n";
  } else {
    os << "level,oracle_energy,monomial_energy,bethe_energy,abs_diff,max_rel_diff,residual_bethe,residual_robust,"
          "degenerate,reduced,pass,root_index,root_re,root_im\n";
  }
  for (std::size_t j = 0; j < rep.levels.size(); ++j) {
    const LevelRecord& l = rep.levels[j];
    const BetheSolution& sol = rep.solutions[j];
    const double abs_diff = std::abs(l.bethe_energy - l.fock_energy);
    if (text) {
      os << "level " << l.level << "\n";
      os << "  oracle_energy " << num(l.fock_energy) << "\n";
      os << "  monomial_energy " << num(l.monomial_energy) << "\n";
      os << "  bethe_energy " << num(l.bethe_energy) << "\n";
      os << "  abs_diff " << num(abs_diff) << "\n";
      os << "  max_rel_diff " << num(l.max_rel_diff) << "\n";
      os << "  residual_bethe " << num(l.residual_bethe) << "\n";
      os << "  residual_robust " << num(l.residual_robust) << "\n";
      os << "  source " << to_string(sol.source) << "\n";
      if (l.degenerate) os << "  degenerate\n";
      if (l.reduced) os << "  reduced\n";
      if (!l.note.empty()) os << "  note " << l.note << "\n";
      for (std::size_t i = 0; i < sol.roots.size(); ++i) {
        os << "  root " << i << " " << num(sol.roots[i].real()) << " " << num(sol.roots[i].imag()) << "\n";
      }
      os << "  status " << (l.pass ? "pass" : "fail") << "\n";
      continue;
    }
    const std::string head = std::to_string(l.level) + "," + num(l.fock_energy) + "," + num(l.monomial_energy) + "," +
                             num(l.bethe_energy) + "," + num(abs_diff) + "," + num(l.max_rel_diff) + "," +
                             num(l.residual_bethe) + "," + num(l.residual_robust) + "," + (l.degenerate ? "1" : "0") +
                             "," + (l.reduced ? "1" : "0") + "," + (l.pass ? "1" : "0") + ",";
    if (sol.roots.empty()) os << head << ",,\n";
    for (std::size_t i = 0; i < sol.roots.size(); ++i) {
      os << head << i << "," << num(sol.roots[i].real()) << "," << num(sol.roots[i].imag()) << "\n";
    }
  }
  return rep.pass ? ok : validation_failure;
}

struct Grid {
  std::string parameter;
  std::vector<Rational> values;
};

Grid parse_grid(const Options& o) {
  Grid grid;
  std::string range;
  if (!o.g_range.empty()) {
    if (!o.param.empty() || !o.range.empty()) throw ConfigError("--g-range", "cannot be combined with --param/--range");
    grid.parameter = "g";
    range = o.g_range;
  } else {
    if (o.param.empty() || o.range.empty()) throw ConfigError("--range", "scan needs --g-range or --param with --range");
    grid.parameter = o.param;
    range = o.range;
  }
  const std::string field = o.g_range.empty() ? "--range" : "--g-range";
  const auto parts = split(range, ':');
  if (parts.size() != 3) throw ConfigError(field, "expected start:stop:step");
  const Rational a = rational_field(field, parts[0]);
  const Rational b = rational_field(field, parts[1]);
  const Rational step = rational_field(field, parts[2]);
  if (step <= 0) throw ConfigError(field, "step must be positive");
  if (b < a) throw ConfigError(field, "stop must not be below start");
  for (Rational x = a; x <= b; x += step) {
    grid.values.push_back(x);
    if (grid.values.size() > 100000) throw ConfigError(field, "more than 100000 grid points");
  }
  return grid;
}

void set_parameter(ModelSpec& model, const std::string& name, const Rational& value) {
  if (name == "g") {
    model.g = value;
    return;
  }
  const auto parts = split(name, '.');
  auto index = [&](const std::string& text) {
    const long i = integer_field("--param", text);
    if (i < 1 || i > model.modes()) throw ConfigError("--param", "index out of range in '" + name + "'");
    return static_cast<int>(i - 1);
  };
  if (parts.size() == 2 && parts[0] == "w") {
    model.w[static_cast<std::size_t>(index(parts[1]))] = value;
  } else if (parts.size() == 3 && parts[0] == "wq") {
    model.quadratic(index(parts[1]), index(parts[2])) = value;
  } else {
    throw ConfigError("--param", "expected g, w.i or wq.i.j, got '" + name + "'");
  }
}

int cmd_scan(const Options& o, const Problem& p, std::ostream& os) {
  const SolverConfig cfg = solver_config(o);
  const bool text = text_format(o);
  const Grid grid = parse_grid(o);
  if (o.threads < 1) throw ConfigError("--threads", "must be >= 1");
  {
    ModelSpec probe = p.model;
    set_parameter(probe, grid.parameter, grid.values.front());
  }

  std::vector<ValidationReport> reports(grid.values.size());
  std::vector<std::string> failures(grid.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.values.size(); i = next++) {
      try {
        ModelSpec m = p.model;
        set_parameter(m, grid.parameter, grid.values[i]);
        reports[i] = cross_validate(m, p.sector, cfg.energy_tol, cfg);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::min<long>(o.threads, static_cast<long>(grid.values.size())));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) throw std::runtime_error("scan point " + to_string(grid.values[i]) + ": " + failures[i]);
  }

  bool all_pass = true;
  if (!text) os << "parameter,value,level,oracle_energy,bethe_energy,abs_diff\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const std::string value = num(to_double(grid.values[i]));
    all_pass = all_pass && reports[i].pass;
    if (text) os << grid.parameter << " " << value << " status " << (reports[i].pass ? "pass" : "fail") << "\n";
    for (const auto& l : reports[i].levels) {
      const double diff = std::abs(l.bethe_energy - l.fock_energy);
      if (text) {
        os << "  level " << l.level << " oracle_energy " << num(l.fock_energy) << " bethe_energy " << num(l.bethe_energy)
           << " abs_diff " << num(diff) << "\n";
      } else {
        os << grid.parameter << "," << value << "," << l.level << "," << num(l.fock_energy) << "," << num(l.bethe_energy)
           << "," << num(diff) << "\n";
      }
    }
  }
  return all_pass ? ok : validation_failure;
}

int cmd_verify_algebra(const Options& o, std::ostream& os) {
  const bool text = text_format(o);
  if (o.kmax < 1 || o.kmax > 12) throw ConfigError("--kmax", "must lie in 1..12");
  constexpr double tol = 1e-12;
  bool all_pass = true;
  if (!text) os << "k,identity,max_residual,status\n";
  auto row = [&](int k, const std::string& identity, double residual) {
    const bool pass = residual <= tol;
    all_pass = all_pass && pass;
    if (text) {
      os << "k=" << k << " " << identity << " " << (pass ? "pass" : "fail") << " max_residual " << num(residual) << "\n";
    } else {
      os << k << "," << identity << "," << num(residual) << "," << (pass ? "pass" : "fail") << "\n";
    }
  };
  for (int k = 1; k <= o.kmax; ++k) {
    const int trunc = o.trunc > 0 ? o.trunc : 6 * k;
    if (trunc < 2 * k + 1) throw ConfigError("--trunc", "must be at least 2k+1 for every k");
    const AlgebraResiduals res = check_algebra(make_generators(k, trunc));
    row(k, "ladder_raise", res.raise);
    row(k, "ladder_lower", res.lower);
    row(k, "commutator", res.commutator);
    row(k, "casimir", res.casimir);
    // k-th forward difference of a degree-k polynomial with leading
    // coefficient -1 is -k!, the (k+1)-th vanishes.
    std::vector<Rational> diff;
    for (int x = 0; x <= k + 1; ++x) diff.push_back(phi_polynomial(k, Rational(x)));
    Rational kth = 0;
    for (int order = 1; order <= k + 1; ++order) {
      for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
      diff.pop_back();
      if (order == k) kth = diff[0];
    }
    Rational factorial = 1;
    for (int i = 2; i <= k; ++i) factorial *= i;
    row(k, "phi_degree", std::abs(to_double(kth + factorial)) + std::abs(to_double(diff[0])));
  }
  if (o.kmax >= 2) row(2, "casimir_value_3/16", std::abs(to_double(casimir_value(2) - make_rational(3, 16))));
  return all_pass ? ok : validation_failure;
}

int cmd_verify_presets(const Options& o, std::ostream& os) {
  const bool text = text_format(o);
  if (o.draws < 1) throw ConfigError("--draws", "must be >= 1");
  std::vector<PresetId> ids;
  if (o.preset_case.empty()) {
    ids = {PresetId::A, PresetId::B, PresetId::C};
  } else {
    try {
      ids = {parse_preset(o.preset_case)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--case", e.what());
    }
  }
  bool mismatch = false;
  if (!text) os << "case,check,matches,known_discrepancies,mismatches,status,example\n";
  for (PresetId id : ids) {
    const PresetReport rep = verify_preset(id, o.draws, o.seed);
    mismatch = mismatch || rep.has_mismatch();
    if (text) os << "case " << to_string(id) << " draws " << rep.draws << "\n";
    for (const auto& c : rep.checks) {
      const char* status = c.mismatches ? "mismatch" : c.known ? "known-discrepancy" : "match";
      if (text) {
        os << "  " << c.name << " " << status << " (" << c.matches << " match, " << c.known << " known, " << c.mismatches
           << " mismatch)";
        if (!c.example.empty()) os << " e.g. " << c.example;
        os << "\n";
      } else {
        os << to_string(id) << "," << c.name << "," << c.matches << "," << c.known << "," << c.mismatches << "," << status
           << "," << c.example << "\n";
      }
    }
    if (text) {
      for (const auto& k : known_discrepancies()) {
        if (k.id == id) os << "  annotation " << k.name << ": " << k.description << "\n";
      }
    }
  }
  return mismatch ? validation_failure : ok;
}

int cmd_roots(const Options& o, const Problem& p, std::ostream& os) {
  const SolverConfig cfg = solver_config(o);
  const bool text = text_format(o);
  if (o.dump_diffop) {
    const DiffOpForm op = expand_diffop(p.model, p.sector);
    const char* lead = text ? "" : "# ";
    os << lead << "order " << op.order << "\n";
    auto poly = [&](const std::string& name, const Polynomial<Rational>& q) {
      os << lead << name;
      if (q.is_zero()) os << " 0";
      for (const auto& c : q.coeffs()) os << " " << to_string(c);
      os << "\n";
    };
    for (std::size_t i = 0; i < op.p.size(); ++i) poly("P" + std::to_string(i), op.p[i]);
    poly("A", op.hop.raise);
    poly("B", op.hop.diag);
    poly("C", op.hop.lower);
  }
  const auto sols = solve_bethe(p.model, p.sector, cfg);
  if (!text) os << "level,energy,oracle_energy,source,root_index,root_re,root_im\n";
  for (const auto& sol : sols) {
    if (text) {
      os << "level " << sol.level << " energy " << num(sol.energy) << " oracle_energy " << num(sol.oracle_energy)
         << " source " << to_string(sol.source) << "\n";
      for (std::size_t i = 0; i < sol.roots.size(); ++i) {
        os << "  root " << i << " " << num(sol.roots[i].real()) << " " << num(sol.roots[i].imag()) << "\n";
      }
      continue;
    }
    const std::string head = std::to_string(sol.level) + "," + num(sol.energy) + "," + num(sol.oracle_energy) + "," +
                             to_string(sol.source) + ",";
    if (sol.roots.empty()) os << head << ",,\n";
    for (std::size_t i = 0; i < sol.roots.size(); ++i) {
      os << head << i << "," << num(sol.roots[i].real()) << "," << num(sol.roots[i].imag()) << "\n";
    }
  }
  return ok;
}

std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path path(out);
  if (const char* dir = std::getenv("MBQES_OUTPUT_DIR"); dir && *dir && path.is_relative()) {
    path = std::filesystem::path(dir) / path;
  }
  return path;
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--preset", o.preset, "Preset model A, B or C");
  cmd->add_option("--config", o.config, "Config file with model.* and sector.* keys");
  cmd->add_option("--r", o.r, "Creation-group mode count");
  cmd->add_option("--s", o.s, "Annihilation-group mode count");
  cmd->add_option("--k", o.k, "Powers k_i, comma separated");
  cmd->add_option("--w", o.w, "Linear couplings, comma separated");
  cmd->add_option("--wq", o.wq, "Quadratic couplings: zero, i.j=v,... or the upper triangle");
  cmd->add_option("--g", o.g, "Interaction strength");
  cmd->add_option("--occ", o.occ, "Occupation vector anchoring the sector");
  cmd->add_option("--kappa", o.kappa, "Sector label kappa");
  cmd->add_option("--l", o.l, "Sector labels l (r-1 then s-1 values)");
  cmd->add_option("--q", o.q, "Sector labels q (r+s values)");
}

void add_solver_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "Relative energy tolerance of the three-way check");
  cmd->add_option("--max-iter", o.max_iter, "Newton iteration cap");
  cmd->add_option("--seed", o.seed, "Seed for direct-mode starts");
  cmd->add_flag("--direct", o.direct, "Also run multi-start Newton on the Bethe equations");
  cmd->add_option("--starts", o.starts, "Number of direct-mode starts");
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (relative paths go under $MBQES_OUTPUT_DIR if set)");
  cmd->add_option("--format", o.format, "csv or text");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact sector spectra and Bethe roots of multi-mode boson Hamiltonians", "mbqes"};
  app.require_subcommand(1, 1);

  auto* solve = app.add_subcommand("solve", "Cross-validate one sector");
  auto* scan = app.add_subcommand("scan", "Sweep one coupling over a grid");
  auto* roots = app.add_subcommand("roots", "Print Bethe roots of one sector");
  for (auto* cmd : {solve, scan, roots}) {
    add_model_options(cmd, o);
    add_solver_options(cmd, o);
    add_output_options(cmd, o);
  }
  scan->add_option("--g-range", o.g_range, "start:stop:step for g");
  scan->add_option("--param", o.param, "Coupling to sweep: g, w.i or wq.i.j");
  scan->add_option("--range", o.range, "start:stop:step for --param");
  scan->add_option("--threads", o.threads, "Worker threads");
  roots->add_flag("--dump-diffop", o.dump_diffop, "Also print P_i(z) and the hop polynomials");

  auto* algebra = app.add_subcommand("verify-algebra", "Check the polynomial algebra identities");
  algebra->add_option("--kmax", o.kmax, "Largest k");
  algebra->add_option("--trunc", o.trunc, "Fock cutoff (default 6k)");
  add_output_options(algebra, o);

  auto* presets = app.add_subcommand("verify-presets", "Compare printed preset formulas with the general expansion");
  presets->add_option("--case", o.preset_case, "A, B or C (default all)");
  presets->add_option("--draws", o.draws, "Random parameter draws per case");
  presets->add_option("--seed", o.seed, "Seed");
  add_output_options(presets, o);

  std::vector<const char*> argv{"mbqes"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : config_error;
  }

  try {
    std::ostringstream buf;
    int code = ok;
    if (algebra->parsed()) {
      code = cmd_verify_algebra(o, buf);
    } else if (presets->parsed()) {
      code = cmd_verify_presets(o, buf);
    } else {
      CLI::App* cmd = solve->parsed() ? solve : scan->parsed() ? scan : roots;
      const bool inline_given = cmd->count("--r") + cmd->count("--s") + cmd->count("--k") > 0;
      std::optional<std::string> config_occ;
      Problem p;
      p.model = resolve_model(o, inline_given, config_occ);
      p.sector = resolve_sector(o, p.model, config_occ);
      code = solve->parsed() ? cmd_solve(o, p, buf) : scan->parsed() ? cmd_scan(o, p, buf) : cmd_roots(o, p, buf);
    }
    if (o.out.empty()) {
      out << buf.str();
    } else {
      const auto path = output_path(o.out);
      std::ofstream file(path, std::ios::binary);
      if (!file) throw ConfigError("--out", "cannot write '" + path.string() + "'");
      file << buf.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return internal_error;
  }
}

}  // namespace mbqes::cli
