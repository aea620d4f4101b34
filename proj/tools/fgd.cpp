// Command-line workbench over the fgd library: certified inversion, orbit
// and limit-cycle reports, period censuses, the bipartite limit graph,
// train tracks, Perron-Frobenius data and tree translation lengths.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fgd/dynamics.hpp"
#include "fgd/trees.hpp"

using nlohmann::json;
using namespace fgd;

namespace {

// exit codes: 0 ok, 1 input/usage error, 3 inconclusive under --strict
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 3;

struct Config {
  std::string aut_path;
  std::string word;
  std::string ep;
  std::string seeds_path;
  int n_max = 400;
  int q_max = 60;
  std::size_t cert_depth = 64;
  double tol = 1e-9;
  std::string format = "text";
  bool strict = false;

  LimitBudget budget() const {
    LimitBudget b;
    b.n_max = n_max;
    b.q_max = q_max;
    b.cert_depth = cert_depth;
    return b;
  }
};

// Stable FNV-1a so provenance hashes are identical across platforms.
std::string config_hash(const Config& c, const std::string& cmd) {
  std::ostringstream os;
  os << cmd << '|' << c.aut_path << '|' << c.word << '|' << c.ep << '|'
     << c.seeds_path << '|' << c.n_max << '|' << c.q_max << '|' << c.cert_depth
     << '|' << c.tol << '|' << c.format;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : os.str()) h = (h ^ ch) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

json provenance(const Config& c, const std::string& cmd) {
  return json{{"config_hash", config_hash(c, cmd)},
              {"nmax", c.n_max},
              {"qmax", c.q_max},
              {"cert_depth", c.cert_depth},
              {"tol", c.tol}};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

Automorphism load_automorphism(const std::string& path) {
  Endomorphism phi = parse_endomorphism(slurp(path));
  InversionResult r = verify_and_invert(phi);
  if (!r.ok()) {
    std::string why = r.failure == InversionFailure::kDeterminantObstruction
                          ? "determinant obstruction"
                          : "not surjective";
    throw std::runtime_error("not an automorphism: " + why);
  }
  return *r.automorphism;
}

std::string omega_status_string(OmegaStatus s) {
  switch (s) {
    case OmegaStatus::kCertified:
      return "certified";
    case OmegaStatus::kPeriodicWord:
      return "periodic-word";
    case OmegaStatus::kNoConvergenceDetected:
      return "no-convergence-detected";
  }
  return "no-convergence-detected";
}

void emit(const Config& c, const json& j, const std::string& text) {
  if (c.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_verify(const Config& c) {
  Endomorphism phi = parse_endomorphism(slurp(c.aut_path));
  InversionResult r = verify_and_invert(phi);
  json j{{"provenance", provenance(c, "verify")}};
  std::ostringstream os;
  if (r.ok()) {
    j["status"] = "automorphism";
    j["inverse"] = format_endomorphism(r.automorphism->inverse());
    j["certificate_moves"] = r.automorphism->certificate().size();
    os << "automorphism: yes\ninverse:\n"
       << format_endomorphism(r.automorphism->inverse());
    emit(c, j, os.str());
    return kExitOk;
  }
  std::string why = r.failure == InversionFailure::kDeterminantObstruction
                        ? "determinant-obstruction"
                        : "not-surjective";
  j["status"] = why;
  os << "automorphism: no (" << why << ")\n";
  emit(c, j, os.str());
  return kExitError;
}

int cmd_orbit(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  ReducedWord g = parse_word(c.word, alpha.rank());
  OrbitTrace tr = orbit(alpha, g, c.n_max);
  json j{{"provenance", provenance(c, "orbit")}, {"terms", json::array()}};
  std::ostringstream os;
  for (std::size_t n = 0; n < tr.terms.size(); ++n) {
    j["terms"].push_back(to_string(tr.terms[n]));
    os << n << ": " << to_string(tr.terms[n]) << "\n";
  }
  emit(c, j, os.str());
  return kExitOk;
}

json omega_to_json(const OmegaLimit& lim) {
  json j{{"status", omega_status_string(lim.status)},
         {"period", lim.period},
         {"cert_depth", lim.cert_depth},
         {"window_used", lim.window_used},
         {"terms_used", lim.terms_used},
         {"points", json::array()}};
  for (const LimitPoint& p : lim.points) j["points"].push_back(point_to_string(p));
  for (const ReducedWord& w : lim.finite_cycle)
    j["finite_cycle"].push_back(to_string(w));
  return j;
}

int cmd_omega(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  OmegaLimit lim;
  if (!c.ep.empty())
    lim = omega_limit_boundary(alpha, parse_ep(c.ep, alpha.rank()), c.budget());
  else
    lim = omega_limit(alpha, parse_word(c.word, alpha.rank()), c.budget());
  json j = omega_to_json(lim);
  j["provenance"] = provenance(c, "omega");
  std::ostringstream os;
  os << "status: " << omega_status_string(lim.status) << "\n";
  if (lim.status == OmegaStatus::kCertified) {
    os << "period: " << lim.period << "\ncert-depth: " << lim.cert_depth
       << "\n";
    for (const LimitPoint& p : lim.points)
      os << "point: " << point_to_string(p) << "\n";
  } else if (lim.status == OmegaStatus::kPeriodicWord) {
    os << "period: " << lim.period << "\n";
    for (const ReducedWord& w : lim.finite_cycle)
      os << "word: " << to_string(w) << "\n";
  }
  emit(c, j, os.str());
  if (lim.status == OmegaStatus::kNoConvergenceDetected && c.strict)
    return kExitInconclusive;
  return kExitOk;
}

int cmd_census(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  std::vector<EventuallyPeriodicWord> seeds;
  if (!c.seeds_path.empty())
    for (const std::string& line : read_lines(c.seeds_path))
      seeds.push_back(parse_ep(line, alpha.rank()));
  int len_max = std::min(c.n_max, 2);
  PeriodCensus census = periods_census(alpha, len_max, seeds, c.q_max);
  json j{{"provenance", provenance(c, "census")},
         {"periods", census.periods},
         {"uncertified", json::array()}};
  std::ostringstream os;
  os << "periods:";
  for (int q : census.periods) os << " " << q;
  os << "\n";
  for (const auto& s : census.uncertified_seeds) {
    j["uncertified"].push_back(to_string(s));
    os << "uncertified: " << to_string(s) << "\n";
  }
  emit(c, j, os.str());
  if (!census.uncertified_seeds.empty() && c.strict) return kExitInconclusive;
  return kExitOk;
}

int cmd_gamma(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  std::vector<ReducedWord> seeds;
  if (!c.seeds_path.empty())
    for (const std::string& line : read_lines(c.seeds_path))
      seeds.push_back(parse_word(line, alpha.rank()));
  else
    for (int i = 0; i < alpha.rank(); ++i)
      seeds.push_back(parse_word(std::string(1, static_cast<char>('a' + i)),
                                 alpha.rank()));
  GammaGraph g = gamma_graph(alpha, seeds, c.budget());
  if (c.format == "dot") {
    std::cout << gamma_to_dot(g);
    return (!g.unresolved_seeds.empty() && c.strict) ? kExitInconclusive
                                                     : kExitOk;
  }
  json j{{"provenance", provenance(c, "gamma")},
         {"repelling", json::array()},
         {"attracting", json::array()},
         {"edges", json::array()},
         {"unresolved", json::array()}};
  std::ostringstream os;
  for (const LimitPoint& p : g.repelling) {
    j["repelling"].push_back(point_to_string(p));
    os << "repelling: " << point_to_string(p) << "\n";
  }
  for (const LimitPoint& p : g.attracting) {
    j["attracting"].push_back(point_to_string(p));
    os << "attracting: " << point_to_string(p) << "\n";
  }
  for (const GammaEdge& e : g.edges) {
    j["edges"].push_back({{"repelling", e.repelling_vertex},
                          {"attracting", e.attracting_vertex},
                          {"seed", to_string(e.witness_seed)}});
    os << "edge: R" << e.repelling_vertex << " -- A" << e.attracting_vertex
       << " (seed " << to_string(e.witness_seed) << ")\n";
  }
  for (const ReducedWord& w : g.unresolved_seeds) {
    j["unresolved"].push_back(to_string(w));
    os << "unresolved: " << to_string(w) << "\n";
  }
  emit(c, j, os.str());
  if (!g.unresolved_seeds.empty() && c.strict) return kExitInconclusive;
  return kExitOk;
}

int cmd_traintrack(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  TrainTrackResult r = try_make_train_track(rose_from_automorphism(alpha));
  json j{{"provenance", provenance(c, "traintrack")},
         {"resolved", r.resolved()},
         {"trace", r.trace}};
  std::ostringstream os;
  for (const std::string& step : r.trace) os << "move: " << step << "\n";
  if (r.resolved()) {
    j["map"] = format_graph_map(*r.map);
    os << "resolved: yes\n" << format_graph_map(*r.map);
    emit(c, j, os.str());
    return kExitOk;
  }
  os << "resolved: no (budget exhausted; not a refutation)\n";
  emit(c, j, os.str());
  return c.strict ? kExitInconclusive : kExitOk;
}

struct TrackData {
  GraphMap map;
  PFData pf;
};

TrackData track_of(const Config& c) {
  Automorphism alpha = load_automorphism(c.aut_path);
  TrainTrackResult r = try_make_train_track(rose_from_automorphism(alpha));
  if (!r.resolved())
    throw std::runtime_error("no train track representative within budget");
  return TrackData{*r.map, pf_data(transition_matrix(*r.map), c.tol)};
}

int cmd_pf(const Config& c) {
  TrackData t = track_of(c);
  json j{{"provenance", provenance(c, "pf")},
         {"lambda", t.pf.lambda},
         {"lambda_lo", t.pf.lambda_lo},
         {"lambda_hi", t.pf.lambda_hi},
         {"edge_lengths", json::array()}};
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "lambda: %.12f\nenclosure: [%.12f, %.12f]\n",
                t.pf.lambda, t.pf.lambda_lo, t.pf.lambda_hi);
  os << buf;
  for (int i = 0; i < t.pf.edge_lengths.size(); ++i) {
    j["edge_lengths"].push_back(t.pf.edge_lengths(i));
    std::snprintf(buf, sizeof(buf), "edge %d length: %.12f\n", i,
                  t.pf.edge_lengths(i));
    os << buf;
  }
  emit(c, j, os.str());
  return kExitOk;
}

int cmd_lengths(const Config& c) {
  TrackData t = track_of(c);
  Automorphism alpha = load_automorphism(c.aut_path);
  std::vector<ReducedWord> words;
  if (!c.seeds_path.empty())
    for (const std::string& line : read_lines(c.seeds_path))
      words.push_back(parse_word(line, alpha.rank()));
  else if (!c.word.empty())
    words.push_back(parse_word(c.word, alpha.rank()));
  else
    throw std::runtime_error("lengths: need --word or --seeds");
  json j{{"provenance", provenance(c, "lengths")}, {"rows", json::array()}};
  std::ostringstream os;
  bool inconclusive = false;
  for (const ReducedWord& g : words) {
    LengthReport rep = translation_length(t.map, t.pf, g, 40, c.tol);
    j["rows"].push_back({{"element", to_string(g)},
                         {"class_key", rep.class_key},
                         {"value", rep.value},
                         {"enclosure", rep.enclosure},
                         {"converged", rep.converged},
                         {"exact", rep.exact},
                         {"legal_at_p", rep.legal_at_p}});
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.10f +- %.2e %s", rep.value,
                  rep.enclosure,
                  rep.converged ? (rep.exact ? "(exact)" : "(converged)")
                                : "(not converged)");
    os << to_string(g) << " [" << rep.class_key << "]: " << buf << "\n";
    if (!rep.converged) inconclusive = true;
  }
  emit(c, j, os.str());
  return (inconclusive && c.strict) ? kExitInconclusive : kExitOk;
}

// -- pinned example suite ----------------------------------------------------

struct ExampleCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass() const { return expected == actual; }
};

int cmd_examples(const Config& c) {
  std::vector<ExampleCheck> checks;

  Automorphism intro = *verify_and_invert(
                            parse_endomorphism("rank 3\na -> cb\nb -> a\nc -> ba\n"))
                            .automorphism;
  OrbitTrace tr = orbit(intro, parse_word("a", 3), 6);
  std::ostringstream terms;
  for (std::size_t i = 0; i < tr.terms.size(); ++i)
    terms << (i ? " " : "") << to_string(tr.terms[i]);
  checks.push_back({"intro orbit of a",
                    "a cb baa acbcb cbbaabaa baaacbcbacbcb", terms.str()});

  OmegaLimit oa = omega_limit(intro, parse_word("a", 3));
  checks.push_back({"intro omega period of a", "certified q=3",
                    omega_status_string(oa.status) + " q=" +
                        std::to_string(oa.period)});
  OmegaLimit oA = omega_limit(intro, parse_word("A", 3));
  checks.push_back({"intro omega period of A", "certified q=2",
                    omega_status_string(oA.status) + " q=" +
                        std::to_string(oA.period)});

  Automorphism beta =
      *verify_and_invert(parse_endomorphism("rank 2\na -> A\nb -> AB\n"))
           .automorphism;
  OmegaLimit ob = omega_limit_boundary(
      beta, ep_from_element(parse_word("a", 2)));
  std::ostringstream bpts;
  bpts << omega_status_string(ob.status) << " q=" << ob.period;
  for (const LimitPoint& p : ob.points) bpts << " " << point_to_string(p);
  checks.push_back({"period-2 boundary orbit", "certified q=2 (a)^inf (A)^inf",
                    bpts.str()});

  Automorphism hilion =
      *verify_and_invert(parse_endomorphism(
                             "rank 4\na -> a\nb -> ba\nc -> caa\nd -> dca\n"))
           .automorphism;
  for (bool fwd : {true, false}) {
    Automorphism gmap = fwd ? hilion : hilion.inverted();
    OmegaLimit oh = omega_limit(gmap, parse_word("baD", 4));
    std::string got = omega_status_string(oh.status);
    if (oh.status == OmegaStatus::kCertified && oh.points.size() == 1)
      got += " " + point_to_string(oh.points[0]);
    checks.push_back({std::string("double limit b(A)^inf, ") +
                          (fwd ? "forward" : "backward"),
                      "certified b(A)^inf", got});
  }

  Automorphism fib =
      *verify_and_invert(parse_endomorphism("rank 2\na -> ab\nb -> a\n"))
           .automorphism;
  PFData pf = pf_data(transition_matrix(rose_from_automorphism(fib)));
  bool phi_inside = pf.lambda_lo <= 1.6180339887 && 1.6180339888 <= pf.lambda_hi &&
                    (pf.lambda_hi - pf.lambda_lo) <= 1e-9;
  checks.push_back({"golden ratio enclosure", "tight",
                    phi_inside ? "tight" : "loose"});

  int failures = 0;
  for (const ExampleCheck& ch : checks) {
    if (ch.pass()) {
      std::cout << "pass  " << ch.name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL  " << ch.name << "\n  expected: " << ch.expected
                << "\n  actual:   " << ch.actual << "\n";
    }
  }
  std::cout << checks.size() - failures << "/" << checks.size() << " passed\n";
  return failures == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for free-group automorphism dynamics"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub, bool needs_aut) {
    auto* aut = sub->add_option("--aut", c.aut_path, "automorphism file");
    if (needs_aut) aut->required();
    sub->add_option("--word", c.word, "word in the generators");
    sub->add_option("--ep", c.ep, "boundary point u(c)^inf");
    sub->add_option("--nmax", c.n_max, "iteration budget");
    sub->add_option("--qmax", c.q_max, "maximal period probed");
    sub->add_option("--cert-depth", c.cert_depth, "certificate prefix depth");
    sub->add_option("--tol", c.tol, "numerical tolerance");
    sub->add_option("--format", c.format, "text | json | dot")
        ->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_flag("--strict", c.strict,
                  "nonzero exit on inconclusive budget exhaustion");
    sub->add_option("--seeds", c.seeds_path, "seed file, one entry per line");
  };

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Config&);
    bool needs_aut;
  };
  const Cmd cmds[] = {
      {"verify", "certify an automorphism and print its inverse", cmd_verify,
       true},
      {"orbit", "iterate a word", cmd_orbit, true},
      {"omega", "certify the limit cycle of an orbit", cmd_omega, true},
      {"census", "periods over short words and boundary seeds", cmd_census,
       true},
      {"gamma", "bipartite limit graph from seed perturbations", cmd_gamma,
       true},
      {"traintrack", "fold the rose toward a train track", cmd_traintrack,
       true},
      {"pf", "Perron-Frobenius data of the train track", cmd_pf, true},
      {"lengths", "tree translation lengths of conjugacy classes", cmd_lengths,
       true},
      {"examples", "run the pinned example suite", cmd_examples, false},
  };
  for (const Cmd& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, cmd.needs_aut);
    sub->callback([&c, &cmd]() {
      int code = cmd.run(c);
      if (code != kExitOk) std::exit(code);
    });
  }

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
