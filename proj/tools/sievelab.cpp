// sievelab: command-line front end for the sieve library.
//
// Exit codes: 0 success, 1 computation error, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sievelab/acceptance.hpp"
#include "sievelab/sievelab.hpp"

using namespace sievelab;

namespace {

struct RunConfig {
  std::string command;
  std::string sieve = "squarefree";
  std::size_t L = 168;
  std::size_t L_max = 10000;
  std::string windows;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  // command-specific
  std::string N = "1";
  std::string pattern;
  std::string forbidden;
  std::string shift;
  std::string mode = "exact";
  std::uint64_t samples = 100000;
  std::string capacity;
  bool no_theory = false;
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

Integer parse_integer(const std::string& s) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return Integer(v);
  } catch (const std::logic_error&) {
    config_error("expected an integer, got '" + s + "'");
  }
}

Real parse_real(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !(v >= 0)) throw std::invalid_argument(s);
    return Real(s);
  } catch (const std::logic_error&) {
    config_error("expected a nonnegative number, got '" + s + "'");
  }
}

/// "3" or "3,-4": coordinates separated by commas.
Element parse_element(const std::string& s, std::size_t n) {
  std::vector<Integer> c;
  for (const auto& tok : split(s, ',')) c.push_back(parse_integer(tok));
  if (c.size() != n) config_error("element '" + s + "' needs " + std::to_string(n) + " coordinates");
  return Element(std::move(c));
}

/// Elements separated by ';', e.g. "0;1" or "0,0;1,0". Empty string is the empty list.
std::vector<Element> parse_elements(const std::string& s, std::size_t n) {
  std::vector<Element> out;
  if (s.empty()) return out;
  for (const auto& tok : split(s, ';')) out.push_back(parse_element(tok, n));
  return out;
}

/// interval:lo..hi, box:lo..hi, ball:N, shifted_ball:c@N; several windows
/// separated by ';'.
std::vector<Window> parse_windows(const std::string& spec, const RingPtr& ring) {
  if (spec.empty()) config_error("--windows is required for this command");
  std::vector<Window> out;
  for (const auto& item : split(spec, ';')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) config_error("window '" + item + "' lacks a kind");
    std::string kind = item.substr(0, colon), body = item.substr(colon + 1);
    if (kind == "interval" || kind == "box") {
      auto dots = body.find("..");
      if (dots == std::string::npos) config_error("window '" + item + "' needs lo..hi");
      Element lo = parse_element(body.substr(0, dots), ring->degree());
      Element hi = parse_element(body.substr(dots + 2), ring->degree());
      if (kind == "interval") out.push_back(Window::interval(ring, lo.coords[0], hi.coords[0]));
      else out.push_back(Window::box(ring, lo, hi));
    } else if (kind == "ball") {
      out.push_back(Window::ball(ring, parse_real(body)));
    } else if (kind == "shifted_ball") {
      auto at = body.find('@');
      if (at == std::string::npos) config_error("window '" + item + "' needs center@radius");
      out.push_back(Window::shifted_ball(ring, parse_element(body.substr(0, at), ring->degree()),
                                         parse_real(body.substr(at + 1))));
    } else {
      config_error("unknown window kind '" + kind + "'");
    }
  }
  return out;
}

Sieve resolve_sieve(const std::string& selector) {
  if (selector.empty()) config_error("--sieve is required");
  if (selector.size() > 5 && selector.substr(selector.size() - 5) == ".json") return sieve_from_file(selector);
  auto [name, params] = parse_selector(selector);
  try {
    return catalog(name, params);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnknownCatalogEntry || e.kind() == ErrorKind::InvalidParams) {
      config_error(e.what());
    }
    throw;
  }
}

Json element_json(const Element& x) {
  if (x.size() == 1) return detail::integer_to_json(x.coords[0]);
  return detail::element_to_json(x);
}

Json config_json(const RunConfig& c, const Sieve* sieve) {
  Json j;
  j["command"] = c.command;
  if (sieve) {
    j["sieve"] = c.sieve;
    j["sieve_document"] = sieve_to_json(*sieve, sieve->is_finite() ? *sieve->length() : 0);
  }
  j["L"] = c.L;
  j["L_max"] = c.L_max;
  j["windows"] = c.windows;
  j["format"] = c.format;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(c.output);
  if (!out) config_error("cannot write '" + c.output + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void emit_json(const RunConfig& c, const Sieve* sieve, Json result) {
  Json j;
  j["config"] = config_json(c, sieve);
  j["result"] = std::move(result);
  emit(c, to_json_text(j));
}

int cmd_catalog(const RunConfig& c) {
  if (c.format == "csv") {
    std::string out = "name,ring,params,summary\n";
    for (const auto& e : catalog_entries()) {
      out += csv_escape(e.name) + "," + csv_escape(e.ring) + "," + csv_escape(e.params) + "," +
             csv_escape(e.summary) + "\n";
    }
    emit(c, out);
    return 0;
  }
  Json arr = Json::array();
  for (const auto& e : catalog_entries()) {
    Json item;
    item["name"] = e.name;
    item["ring"] = e.ring;
    item["params"] = e.params;
    item["summary"] = e.summary;
    arr.push_back(item);
  }
  emit_json(c, nullptr, arr);
  return 0;
}

int cmd_sieve(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto windows = parse_windows(c.windows, s.ring_ptr());
  Json rows = Json::array();
  std::string csv = "window_id,point\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto pts = rfree_window(s, windows[i], c.L, c.threads);
    Json row;
    row["window"] = windows[i].describe();
    row["size"] = windows[i].size();
    row["count"] = pts.size();
    Json list = Json::array();
    for (const auto& p : pts) {
      list.push_back(element_json(p));
      std::string ps = p.str();
      csv += std::to_string(i) + "," + csv_escape(ps.substr(1, ps.size() - 2)) + "\n";
    }
    row["points"] = list;
    rows.push_back(row);
  }
  if (c.format == "csv") emit(c, csv);
  else emit_json(c, &s, rows);
  return 0;
}

int cmd_validate(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto rep = validate(s, c.L);
  Json j;
  j["checked"] = rep.checked;
  j["erdos_partial_sum"] = static_cast<double>(rep.erdos_partial_sum);
  j["valid"] = true;
  emit_json(c, &s, j);
  return 0;
}

int cmd_density(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto windows = parse_windows(c.windows, s.ring_ptr());
  std::optional<double> theory;
  Json prod;
  if (!c.no_theory) {
    auto p = partial_density_product(s, c.L);
    theory = static_cast<double>(p.value);
    prod["value"] = *theory;
    prod["upper_bound"] = p.upper_bound;
    prod["erdos_partial_sum"] = static_cast<double>(p.erdos_partial_sum);
    prod["terms"] = p.terms;
  }
  auto rep = empirical_density(rfree_members(s, c.L, c.threads), windows, theory);
  if (c.format == "csv") {
    emit(c, rep.to_csv());
    return 0;
  }
  Json j = rep.to_json();
  if (!c.no_theory) j["partial_product"] = prod;
  emit_json(c, &s, j);
  return 0;
}

int cmd_tails(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto windows = parse_windows(c.windows, s.ring_ptr());
  Json rows = Json::array();
  std::string csv = "window_id,size,weak,strong\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto weak = weak_tail_statistic(s, c.L, c.L_max, windows[i], c.threads);
    auto strong = strong_tail_statistic(s, c.L, c.L_max, windows[i], c.threads);
    Json row;
    row["window"] = windows[i].describe();
    row["size"] = windows[i].size();
    row["weak"] = weak.value;
    row["weak_count"] = weak.count;
    row["strong"] = strong.value;
    row["strong_count"] = strong.count;
    row["note"] = weak.note;
    rows.push_back(row);
    csv += std::to_string(i) + "," + std::to_string(windows[i].size()) + "," + fmt17(weak.value) + "," +
           fmt17(strong.value) + "\n";
  }
  if (c.format == "csv") emit(c, csv);
  else emit_json(c, &s, rows);
  return 0;
}

int cmd_cylinder(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  const std::size_t n = s.ring().degree();
  PatternSpec spec(parse_elements(c.pattern, n), parse_elements(c.forbidden, n));
  auto m = cylinder_measure(spec, s, c.L);
  Json j;
  Json a = Json::array(), b = Json::array();
  for (const auto& x : spec.A) a.push_back(element_json(x));
  for (const auto& x : spec.B) b.push_back(element_json(x));
  j["A"] = a;
  j["B"] = b;
  j["L"] = s.available(c.L);
  j["value"] = m.value;
  j["partial_products"] = m.partial_products;
  j["admissibility"] = is_admissible(spec.A, s, c.L).str();
  if (c.format == "csv") {
    emit(c, "L,value\n" + std::to_string(s.available(c.L)) + "," + fmt17(m.value) + "\n");
    return 0;
  }
  emit_json(c, &s, j);
  return 0;
}

int cmd_pattern(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto A = parse_elements(c.pattern, s.ring().degree());
  auto windows = parse_windows(c.windows, s.ring_ptr());
  Json rows = Json::array();
  std::string csv = "window_id,size,count,empirical,theoretical,abs_error\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto ex = pattern_density_experiment(A, s, windows[i], c.L, c.threads);
    rows.push_back(ex.to_json());
    csv += std::to_string(i) + "," + std::to_string(ex.window_size) + "," + std::to_string(ex.count) + "," +
           fmt17(ex.empirical) + "," + fmt17(ex.theoretical) + "," + fmt17(ex.abs_error) + "\n";
  }
  if (c.format == "csv") emit(c, csv);
  else emit_json(c, &s, rows);
  return 0;
}

int cmd_entropy(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto windows = parse_windows(c.windows, s.ring_ptr());
  if (c.mode != "exact" && c.mode != "mc") config_error("--mode must be exact or mc");
  EntropyParams params;
  params.samples = c.samples;
  params.seed = c.seed;
  params.threads = c.threads;
  if (!c.capacity.empty()) {
    CapacityVector cv;
    for (const auto& tok : split(c.capacity, ',')) {
      Integer v = parse_integer(tok);
      if (v < 0) config_error("capacity entries must be nonnegative");
      cv.s.push_back(static_cast<std::size_t>(v));
    }
    params.capacity = cv;
  }
  const EntropyMode mode = c.mode == "exact" ? EntropyMode::Exact : EntropyMode::MonteCarlo;
  Json rows = Json::array();
  std::string csv = "window_id,size,mode,bits_per_point,formula_value,gap\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto e = entropy_estimate(s, c.L, windows[i], mode, params);
    rows.push_back(e.to_json());
    csv += std::to_string(i) + "," + std::to_string(e.window_size) + "," + c.mode + "," + fmt17(e.bits_per_point) +
           "," + fmt17(e.formula_value) + "," + fmt17(e.gap) + "\n";
  }
  if (c.format == "csv") emit(c, csv);
  else emit_json(c, &s, rows);
  return 0;
}

int cmd_hole(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  auto h = find_hole(s, parse_real(c.N));
  Json j;
  j["x"] = element_json(h.x);
  j["verified"] = h.verified;
  j["N"] = c.N;
  Json ball = Json::array();
  for (const auto& b : h.ball) ball.push_back(element_json(b));
  j["ball"] = ball;
  if (c.format == "csv") {
    std::string xs = h.x.str();
    emit(c, "x,verified\n" + csv_escape(xs.substr(1, xs.size() - 2)) + "," + (h.verified ? "true" : "false") + "\n");
    return 0;
  }
  emit_json(c, &s, j);
  return 0;
}

int cmd_translate(const RunConfig& c) {
  Sieve s = resolve_sieve(c.sieve);
  if (c.shift.empty()) config_error("--shift is required");
  Element t = parse_element(c.shift, s.ring().degree());
  auto windows = parse_windows(c.windows, s.ring_ptr());
  Json rows = Json::array();
  std::string csv = "window_id,holds,pairs_checked\n";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto r = translation_check(s, t, windows[i], c.L, c.threads);
    Json row;
    row["window"] = windows[i].describe();
    row["holds"] = r.holds;
    row["pairs_checked"] = r.pairs_checked;
    row["counterexample"] = r.counterexample ? element_json(*r.counterexample) : Json(nullptr);
    rows.push_back(row);
    csv += std::to_string(i) + "," + (r.holds ? "true" : "false") + "," + std::to_string(r.pairs_checked) + "\n";
  }
  if (c.format == "csv") emit(c, csv);
  else emit_json(c, &s, rows);
  return 0;
}

int cmd_verify(const RunConfig& c) {
  auto results = acceptance::run_all(c.threads);
  std::string out;
  int failed = 0;
  for (const auto& r : results) {
    out += acceptance::format_line(r) + "\n";
    for (const auto& note : r.info) out += "  [INFO] " + note + "\n";
    failed += r.pass ? 0 : 1;
  }
  out += std::to_string(failed) + " of " + std::to_string(results.size()) + " criteria failed\n";
  emit(c, out);
  return failed == 0 ? 0 : 1;
}

std::size_t env_threads() {
  const char* v = std::getenv("SIEVELAB_THREADS");
  if (!v || !*v) return default_threads();
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != std::string(v).size() || n < 1) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    config_error(std::string("SIEVELAB_THREADS must be a positive integer, got '") + v + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Erdos sieves over rings of integers: windows, densities, cylinders, entropy, holes."};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub, bool sieve, bool windows) {
    if (sieve) sub->add_option("--sieve", c.sieve, "catalog selector name:key=value,... or a .json sieve file");
    sub->add_option("--L", c.L, "truncation level")->check(CLI::NonNegativeNumber);
    if (windows) sub->add_option("--windows", c.windows, "window list, e.g. interval:1..1000000;box:-5,-5..5,5");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "write the report here instead of stdout");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--threads", c.threads, "worker threads (default: SIEVELAB_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  auto* catalog_cmd = app.add_subcommand("catalog", "list built-in sieves and their parameters");
  catalog_cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  catalog_cmd->add_option("--output", c.output, "write the report here instead of stdout");

  auto* sieve_cmd = app.add_subcommand("sieve", "list the R-free points of windows");
  common(sieve_cmd, true, true);

  auto* validate_cmd = app.add_subcommand("validate", "check terms 1..L form a sieve");
  common(validate_cmd, true, false);

  auto* density_cmd = app.add_subcommand("density", "empirical density against the partial product");
  common(density_cmd, true, true);
  density_cmd->add_flag("--no-theory", c.no_theory, "skip the partial product");

  auto* tails_cmd = app.add_subcommand("tails", "weak and strong light-tail statistics");
  common(tails_cmd, true, true);
  tails_cmd->add_option("--L-max", c.L_max, "last tail term")->check(CLI::NonNegativeNumber);

  auto* cyl_cmd = app.add_subcommand("cylinder", "Mirsky measure of {Y : A in Y, Y cap B empty}");
  common(cyl_cmd, true, false);
  cyl_cmd->add_option("--pattern", c.pattern, "required points A, e.g. 0;1")->required();
  cyl_cmd->add_option("--forbidden", c.forbidden, "forbidden points B, e.g. 2;3");

  auto* pat_cmd = app.add_subcommand("pattern", "density of x with x + A inside F_R");
  common(pat_cmd, true, true);
  pat_cmd->add_option("--pattern", c.pattern, "pattern A, e.g. 0;1")->required();

  auto* ent_cmd = app.add_subcommand("entropy", "patch-counting entropy on small windows");
  common(ent_cmd, true, true);
  ent_cmd->add_option("--mode", c.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  ent_cmd->add_option("--samples", c.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  ent_cmd->add_option("--capacity", c.capacity, "capacity vector s_1,s_2,...");

  auto* hole_cmd = app.add_subcommand("hole", "CRT construction of an R-free-point-free ball");
  common(hole_cmd, true, false);
  hole_cmd->add_option("--N", c.N, "ball radius");

  auto* tr_cmd = app.add_subcommand("translate", "check x in F_R iff x + t in F_R on windows");
  common(tr_cmd, true, true);
  tr_cmd->add_option("--shift", c.shift, "translation t, e.g. 1,0")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--output", c.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    if (c.threads == 0) c.threads = env_threads();
    if (c.command == "catalog") return cmd_catalog(c);
    if (c.command == "sieve") return cmd_sieve(c);
    if (c.command == "validate") return cmd_validate(c);
    if (c.command == "density") return cmd_density(c);
    if (c.command == "tails") return cmd_tails(c);
    if (c.command == "cylinder") return cmd_cylinder(c);
    if (c.command == "pattern") return cmd_pattern(c);
    if (c.command == "entropy") return cmd_entropy(c);
    if (c.command == "hole") return cmd_hole(c);
    if (c.command == "translate") return cmd_translate(c);
    if (c.command == "verify") return cmd_verify(c);
    config_error("unknown command");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
