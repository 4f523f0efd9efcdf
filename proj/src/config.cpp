#include "shocklab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace shocklab {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::vector<std::string>>& documented_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"case", {"mach", "gamma", "discretization"}},
      {"grid", {"kind", "n_radial", "n_circumferential", "r_cylinder", "r_outer", "seed", "file"}},
      {"scheme", {"scheme", "order", "limiter", "K", "entropy_fix", "entropy_delta", "indicator_exponent"}},
      {"run", {"cfl", "max_iters", "residual_tol", "deterministic", "threads"}},
      {"output", {"dir", "prefix", "vtk"}},
      {"sweep", {"preset"}},
  };
  return keys;
}

const std::set<std::string> list_keys{"grid.kind", "case.discretization", "scheme.scheme",
                                      "scheme.order", "scheme.limiter", "scheme.K"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

bool is_known(const std::string& section, const std::string& key) {
  const auto it = documented_keys().find(section);
  return it != documented_keys().end() && std::find(it->second.begin(), it->second.end(), key) != it->second.end();
}

// Flattens the INI tree to "section.key" -> value, resolving section-less keys by name.
std::map<std::string, std::string> flatten_tree(const pt::ptree& tree) {
  std::map<std::string, std::string> out;
  auto insert = [&](const std::string& full, const std::string& value) {
    if (!out.emplace(full, trim(value)).second) throw ConfigError("duplicate key '" + full + "'");
  };
  for (const auto& [name, node] : tree) {
    if (!node.empty()) {
      if (!documented_keys().count(name)) throw ConfigError("unknown section '[" + name + "]'");
      for (const auto& [key, leaf] : node) {
        if (!is_known(name, key)) throw ConfigError("unknown key '" + key + "' in section [" + name + "]");
        insert(name + "." + key, leaf.data());
      }
      continue;
    }
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      const std::string section = name.substr(0, dot), key = name.substr(dot + 1);
      if (!is_known(section, key)) throw ConfigError("unknown key '" + name + "'");
      insert(name, node.data());
      continue;
    }
    std::string owner;
    for (const auto& [section, keys] : documented_keys())
      if (std::find(keys.begin(), keys.end(), name) != keys.end()) owner = section;
    if (owner.empty()) throw ConfigError("unknown key '" + name + "'");
    insert(owner + "." + name, node.data());
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const long long v = to_integer(key, s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("key '" + key + "': value out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + s + "'");
}

template <class Fn>
auto convert(const std::string& key, const std::string& s, Fn&& fn) {
  try {
    return fn(s);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

Scheme to_scheme(const std::string& key, const std::string& s) {
  return convert(key, s, [](const std::string& v) { return scheme_from_string(v); });
}
GridKind to_grid(const std::string& key, const std::string& s) {
  return convert(key, s, [](const std::string& v) { return grid_kind_from_string(v); });
}
LimiterKind to_limiter(const std::string& key, const std::string& s) {
  return convert(key, s, [](const std::string& v) { return limiter_from_string(v); });
}

// Applies every scalar key; list keys are skipped when `sweep` is set.
CaseConfig apply(const std::map<std::string, std::string>& kv, bool sweep) {
  CaseConfig c;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  const bool preset = get("sweep.preset") != nullptr;

  if (const auto* v = get("case.mach")) c.mach = to_double("mach", *v);
  else throw ConfigError("missing required key 'mach'");
  if (const auto* v = get("case.gamma")) c.gas.gamma = to_double("gamma", *v);

  if (const auto* v = get("grid.file")) c.mesh_file = *v;
  if (!sweep) {
    if (const auto* v = get("grid.kind")) c.grid_kind = to_grid("grid.kind", *v);
    else if (c.mesh_file.empty()) throw ConfigError("missing required key 'grid.kind'");
    if (const auto* v = get("case.discretization"))
      c.discretization = convert("discretization", *v, [](const std::string& s) { return discretization_from_string(s); });
    if (const auto* v = get("scheme.scheme")) c.scheme.scheme = to_scheme("scheme", *v);
    else throw ConfigError("missing required key 'scheme'");
    if (const auto* v = get("scheme.order")) c.order = to_int("order", *v);
    if (const auto* v = get("scheme.limiter")) c.limiter.kind = to_limiter("limiter", *v);
    else if (c.order == 2) throw ConfigError("order 2 requires 'limiter' (use none for unlimited)");
    if (const auto* v = get("scheme.K")) c.limiter.k = to_double("K", *v);
  } else {
    if (!preset && !get("grid.kind") && c.mesh_file.empty()) throw ConfigError("missing required key 'grid.kind'");
    if (!preset && !get("scheme.scheme")) throw ConfigError("missing required key 'scheme'");
  }

  if (const auto* v = get("grid.n_radial")) c.grid.n_radial = to_int("n_radial", *v);
  if (const auto* v = get("grid.n_circumferential")) c.grid.n_circumferential = to_int("n_circumferential", *v);
  if (const auto* v = get("grid.r_cylinder")) c.grid.r_cylinder = to_double("r_cylinder", *v);
  if (const auto* v = get("grid.r_outer")) c.grid.r_outer = to_double("r_outer", *v);
  if (const auto* v = get("grid.seed")) {
    const long long s = to_integer("seed", *v);
    if (s < 0) throw ConfigError("key 'seed': must be non-negative");
    c.grid.random_seed = static_cast<std::uint64_t>(s);
  }

  if (const auto* v = get("scheme.entropy_fix")) {
    if (*v == "none") c.scheme.entropy_fix.kind = EntropyFix::Kind::none;
    else if (*v == "harten") c.scheme.entropy_fix.kind = EntropyFix::Kind::harten;
    else throw ConfigError("key 'entropy_fix': expected none or harten, got '" + *v + "'");
  }
  if (const auto* v = get("scheme.entropy_delta")) c.scheme.entropy_fix.delta = to_double("entropy_delta", *v);
  if (const auto* v = get("scheme.indicator_exponent")) c.indicator_exponent = to_double("indicator_exponent", *v);

  if (const auto* v = get("run.cfl")) c.cfl = to_double("cfl", *v);
  if (const auto* v = get("run.max_iters")) c.max_iters = to_int("max_iters", *v);
  if (const auto* v = get("run.residual_tol")) c.residual_tol = to_double("residual_tol", *v);
  if (const auto* v = get("run.deterministic")) c.deterministic = to_bool("deterministic", *v);
  if (const auto* v = get("run.threads")) c.threads = to_int("threads", *v);

  if (const auto* v = get("output.dir")) c.output.dir = *v;
  if (const auto* v = get("output.prefix")) c.output.prefix = *v;
  if (const auto* v = get("output.vtk")) c.output.vtk = to_bool("vtk", *v);
  return c;
}

bool looks_like_sweep(const std::map<std::string, std::string>& kv) {
  if (kv.count("sweep.preset")) return true;
  for (const auto& k : list_keys) {
    const auto it = kv.find(k);
    if (it != kv.end() && it->second.find(',') != std::string::npos) return true;
  }
  return false;
}

SweepSpec make_sweep(const std::map<std::string, std::string>& kv) {
  SweepSpec s;
  s.base = apply(kv, true);
  auto list = [&](const std::string& k) -> std::vector<std::string> {
    const auto it = kv.find(k);
    return it == kv.end() ? std::vector<std::string>{} : split_list(it->second);
  };
  if (const auto it = kv.find("sweep.preset"); it != kv.end()) {
    if (it->second != "matrix") throw ConfigError("key 'preset': only 'matrix' is supported, got '" + it->second + "'");
    s.preset = it->second;
  }
  for (const auto& v : list("grid.kind")) s.grids.push_back(to_grid("grid.kind", v));
  for (const auto& v : list("case.discretization"))
    s.discretizations.push_back(convert("discretization", v, [](const std::string& x) { return discretization_from_string(x); }));
  for (const auto& v : list("scheme.scheme")) s.schemes.push_back(to_scheme("scheme", v));
  for (const auto& v : list("scheme.order")) s.orders.push_back(to_int("order", v));
  for (const auto& v : list("scheme.limiter")) s.limiters.push_back(to_limiter("limiter", v));
  for (const auto& v : list("scheme.K")) s.ks.push_back(to_double("K", v));
  if (s.grids.empty()) s.grids.push_back(s.base.grid_kind);
  if (s.discretizations.empty()) s.discretizations.push_back(Discretization::cell);
  if (s.schemes.empty()) s.schemes.push_back(s.base.scheme.scheme);
  if (s.orders.empty()) s.orders.push_back(1);
  if (s.limiters.empty()) s.limiters.push_back(LimiterKind::none);
  if (s.ks.empty()) s.ks.push_back(1.0);
  if (std::count(s.orders.begin(), s.orders.end(), 2) > 0 && !kv.count("scheme.limiter"))
    throw ConfigError("order 2 requires 'limiter' (use none for unlimited)");
  return s;
}

std::map<std::string, std::string> read_tree(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return flatten_tree(tree);
}

bool uses_k(LimiterKind k) {
  return k == LimiterKind::venkatakrishnan || k == LimiterKind::mlp || k == LimiterKind::mlp_pw;
}

std::string case_label(const CaseConfig& c) {
  std::string s = std::string(to_string(c.grid_kind)) + "-" + std::string(to_string(c.discretization)) + "-" +
                  std::string(to_string(c.scheme.scheme)) + "-o" + std::to_string(c.order);
  if (c.order == 2) {
    s += "-" + std::string(to_string(c.limiter.kind));
    if (uses_k(c.limiter.kind)) s += "-K" + format_double(c.limiter.k);
  }
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::variant<CaseConfig, SweepSpec> parse_config_string(const std::string& text) {
  std::istringstream in(text);
  const auto kv = read_tree(in);
  if (looks_like_sweep(kv)) {
    SweepSpec s = make_sweep(kv);
    for (const auto& c : expand(s)) validate(c.config);
    return s;
  }
  CaseConfig c = apply(kv, false);
  validate(c);
  return c;
}

std::variant<CaseConfig, SweepSpec> parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

CaseConfig parse_case(const std::filesystem::path& path) {
  auto v = parse_config(path);
  if (auto* c = std::get_if<CaseConfig>(&v)) return *c;
  throw ConfigError(path.string() + " describes a sweep, not a single case");
}

SweepSpec parse_sweep(const std::filesystem::path& path) {
  auto v = parse_config(path);
  if (auto* s = std::get_if<SweepSpec>(&v)) return *s;
  SweepSpec s;
  s.base = std::get<CaseConfig>(v);
  s.grids = {s.base.grid_kind};
  s.discretizations = {s.base.discretization};
  s.schemes = {s.base.scheme.scheme};
  s.orders = {s.base.order};
  s.limiters = {s.base.limiter.kind};
  s.ks = {s.base.limiter.k};
  return s;
}

std::vector<LabeledCase> expand(const SweepSpec& sweep) {
  if (sweep.preset == "matrix") return reference_matrix(sweep.base);
  std::vector<LabeledCase> out;
  for (GridKind g : sweep.grids)
    for (Discretization d : sweep.discretizations)
      for (Scheme s : sweep.schemes)
        for (int order : sweep.orders)
          for (std::size_t li = 0; li < sweep.limiters.size(); ++li)
            for (std::size_t ki = 0; ki < sweep.ks.size(); ++ki) {
              if (order == 1 && (li > 0 || ki > 0)) continue;
              if (order == 2 && !uses_k(sweep.limiters[li]) && ki > 0) continue;
              CaseConfig c = sweep.base;
              c.grid_kind = g;
              c.discretization = d;
              c.scheme.scheme = s;
              c.order = order;
              c.limiter.kind = order == 2 ? sweep.limiters[li] : LimiterKind::none;
              c.limiter.k = sweep.ks[ki];
              out.push_back({case_label(c), c});
            }
  return out;
}

std::vector<LabeledCase> reference_matrix(const CaseConfig& base) {
  struct Row {
    const char* group;
    GridKind grid;
    Discretization disc;
    Scheme scheme;
    int order;
    LimiterKind limiter;
    double k;
  };
  using G = GridKind;
  using D = Discretization;
  using S = Scheme;
  using L = LimiterKind;
  const Row rows[] = {
      {"carbuncle", G::quad, D::cell, S::roe, 1, L::none, 1.0},
      {"carbuncle", G::quad, D::cell, S::van_leer, 1, L::none, 1.0},
      {"irregular", G::irregular_tri, D::cell, S::ausm_plus, 1, L::none, 1.0},
      {"irregular", G::irregular_tri, D::cell, S::slau, 1, L::none, 1.0},
      {"regular", G::regular_tri, D::cell, S::slau, 1, L::none, 1.0},
      {"hybrid", G::regular_tri, D::cell, S::slau_hybrid, 1, L::none, 1.0},
      {"hybrid", G::regular_tri, D::cell, S::tv_hybrid, 1, L::none, 1.0},
      {"hybrid", G::irregular_tri, D::cell, S::slau_hybrid, 1, L::none, 1.0},
      {"hybrid", G::irregular_tri, D::cell, S::tv_hybrid, 1, L::none, 1.0},
      {"vertex", G::quad, D::vertex, S::roe, 1, L::none, 1.0},
      {"vertex", G::regular_tri, D::vertex, S::roe, 1, L::none, 1.0},
      {"vertex", G::irregular_tri, D::vertex, S::roe, 1, L::none, 1.0},
      {"limiter", G::quad, D::cell, S::van_leer, 2, L::venkatakrishnan, 1.0},
      {"limiter", G::quad, D::cell, S::van_leer, 2, L::barth, 1.0},
      {"limiter", G::quad, D::cell, S::van_leer, 2, L::mlp, 1.0},
      {"pw_limiter", G::quad, D::cell, S::van_leer, 2, L::mlp_pw, 1.0},
      {"pw_limiter", G::quad, D::cell, S::van_leer, 2, L::mlp_pw, 10.0},
  };
  std::vector<LabeledCase> out;
  for (const Row& r : rows) {
    CaseConfig c = base;
    c.mesh_file.clear();
    c.grid_kind = r.grid;
    c.discretization = r.disc;
    c.scheme.scheme = r.scheme;
    c.order = r.order;
    c.limiter = {r.limiter, r.k};
    out.push_back({std::string(r.group) + "-" + case_label(c), c});
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> flatten(const CaseConfig& c) {
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  std::vector<std::pair<std::string, std::string>> out{
      {"case.mach", format_double(c.mach)},
      {"case.gamma", format_double(c.gas.gamma)},
      {"case.discretization", std::string(to_string(c.discretization))},
      {"grid.kind", std::string(to_string(c.grid_kind))},
      {"grid.n_radial", std::to_string(c.grid.n_radial)},
      {"grid.n_circumferential", std::to_string(c.grid.n_circumferential)},
      {"grid.r_cylinder", format_double(c.grid.r_cylinder)},
      {"grid.r_outer", format_double(c.grid.r_outer)},
      {"grid.seed", std::to_string(c.grid.random_seed)},
  };
  if (!c.mesh_file.empty()) out.emplace_back("grid.file", c.mesh_file.string());
  out.insert(out.end(),
             {
                 {"scheme.scheme", std::string(to_string(c.scheme.scheme))},
                 {"scheme.order", std::to_string(c.order)},
                 {"scheme.limiter", std::string(to_string(c.limiter.kind))},
                 {"scheme.K", format_double(c.limiter.k)},
                 {"scheme.entropy_fix", c.scheme.entropy_fix.kind == EntropyFix::Kind::harten ? "harten" : "none"},
                 {"scheme.entropy_delta", format_double(c.scheme.entropy_fix.delta)},
                 {"scheme.indicator_exponent", format_double(c.indicator_exponent)},
                 {"run.cfl", format_double(c.cfl)},
                 {"run.max_iters", std::to_string(c.max_iters)},
                 {"run.residual_tol", format_double(c.residual_tol)},
                 {"run.deterministic", b(c.deterministic)},
                 {"run.threads", std::to_string(c.threads)},
                 {"output.dir", c.output.dir.string()},
                 {"output.prefix", c.output.prefix},
                 {"output.vtk", b(c.output.vtk)},
             });
  return out;
}

std::string dump_config(const CaseConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [full, value] : flatten(cfg)) {
    const auto dot = full.find('.');
    const std::string s = full.substr(0, dot);
    if (s != section) {
      if (!section.empty()) os << '\n';
      os << '[' << s << "]\n";
      section = s;
    }
    os << full.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

}  // namespace shocklab
