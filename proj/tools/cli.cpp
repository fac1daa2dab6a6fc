#include "cli.hpp"

#include "bhlab/binary_code.hpp"
#include "bhlab/configurations.hpp"
#include "bhlab/constructions.hpp"
#include "bhlab/entropy.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/oracle.hpp"
#include "bhlab/random_coding.hpp"
#include "bhlab/rates.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace bhlab::cli {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

namespace {

using nlohmann::json;

std::string fixed(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::vector<Rational> parse_masses(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(Errc::parse_error, "empty mass list");
  return out;
}

Vector<Rational> parse_sequence(const std::string& text) {
  const auto v = parse_masses(text);
  Vector<Rational> s(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) s[static_cast<Eigen::Index>(i)] = v[i];
  return s;
}

/// Masses over n0-bit words when n0 > 0, else over the integers 0..m-1.
Distribution<Rational> parse_distribution(const std::string& text, int n0) {
  auto masses = parse_masses(text);
  if (n0 > 0) return Distribution<Rational>::bits(n0, masses);
  std::vector<GroupElement> support;
  Vector<Rational> mass(static_cast<Eigen::Index>(masses.size()));
  for (std::size_t i = 0; i < masses.size(); ++i) {
    GroupElement v(1);
    v[0] = static_cast<std::int64_t>(i);
    support.push_back(v);
    mass[static_cast<Eigen::Index>(i)] = masses[i];
  }
  return Distribution<Rational>(std::move(support), std::move(mass));
}

double parse_alpha(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double a = std::stod(text, &used);
  if (used != text.size()) throw Error(Errc::parse_error, "bad alpha '" + text + "'");
  return a;
}

std::string element_str(const GroupElement& v) {
  if (v.size() == 1) return std::to_string(v[0]);
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string sequence_str(const Vector<Rational>& s) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
  return out + ")";
}

std::string violation_str(const Violation& v, const PackedWords& words) {
  std::string out;
  for (std::size_t c = 0; c < v.columns.size(); ++c) {
    if (c) out += " = ";
    for (std::size_t i = 0; i < v.columns[c].size(); ++i) out += (i ? "+" : "") + words.to_string(v.columns[c][i]);
  }
  return out;
}

struct Params {
  // global
  std::string manifest;
  int threads = 0;
  Caps caps;
  // shared
  std::uint64_t q = 0;
  int h = 2, g = 1, d = 0, k = 0, l = 2, n = 0, n0 = 0, attempts = 5;
  std::uint64_t seed = 0;
  bool binary = false, as_json = false, as_csv = false, sconf = false, sharp = false, fd = false;
  std::string input, out_path, stats_path, dist, alpha = "2", p_seq, q_seq;
  double p_point = 0.5;
  std::size_t trials = 1000;
  int shift = 1;
  std::vector<double> scan;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  OracleOptions oracle() const {
    OracleOptions o;
    o.caps = p_.caps;
    o.threads = p_.threads;
    return o;
  }

  std::ostream& sink(std::ofstream& file, const std::string& path) {
    if (path.empty()) return text_;
    file.open(path, std::ios::binary);
    if (!file) throw Error(Errc::invalid_params, "cannot write " + path);
    artifacts_.push_back(path);
    return file;
  }

  int construct(const std::string& which);
  int verify(const std::string& which);
  int configs();
  int rate(const std::string& which);
  int simulate();
  int entropy(const std::string& which);
  int replay();

  void write_manifest(const std::vector<std::string>& args, const std::string& subcommand, double seconds);

  std::ostream& out_;
  std::ostream& err_;
  std::ostringstream text_;
  std::vector<std::string> artifacts_;
  Params p_;
};

int Runner::construct(const std::string& which) {
  std::ofstream file;
  std::ostream& os = sink(file, p_.out_path);
  if (which == "bose-chowla") {
    const auto s = bose_chowla(p_.q, p_.h, p_.caps);
    if (p_.binary) {
      write_code(os, residues_to_binary(s).words(), p_.h, "bose-chowla");
    } else {
      os << "m=" << s.modulus << " h=" << s.h << " source=bose-chowla\n";
      for (auto e : s.elements) os << e << '\n';
    }
  } else {
    const auto s = power_map(p_.q, p_.h, p_.caps);
    if (p_.binary) {
      write_code(os, field_vectors_to_binary(s).words(), p_.h, "power-map");
    } else {
      os << "q=" << p_.q << " h=" << s.h << " source=power-map\n";
      for (const auto& v : s.elements) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i].index();
        os << '\n';
      }
    }
  }
  return 0;
}

int Runner::verify(const std::string& which) {
  const auto file = read_code_file(p_.input);
  const auto& words = file.words;
  std::optional<Violation> v;
  if (which == "bh")
    v = verify_bh(words, p_.h, oracle());
  else if (which == "bhg")
    v = verify_bhg(words, p_.h, p_.g, oracle());
  else
    v = verify_bh_sharp(words, p_.h, p_.d, oracle());
  if (!v) {
    text_ << "pass\n";
    return 0;
  }
  text_ << "violation: " << violation_str(*v, words) << '\n' << to_json(*v).dump() << '\n';
  return 1;
}

int Runner::configs() {
  std::vector<Configuration> confs;
  if (p_.sharp)
    confs = enumerate_conf_sharp(p_.k, p_.d, p_.caps);
  else if (p_.sconf)
    confs = enumerate_sconf(p_.k, p_.l, p_.caps);
  else
    confs = enumerate_conf(p_.k, p_.l, p_.caps);
  if (p_.as_json) {
    auto arr = json::array();
    for (const auto& c : confs) arr.push_back(to_json(c, conf_stats(c, p_.caps)));
    text_ << arr.dump(2) << '\n';
  } else {
    for (const auto& c : confs) {
      const auto s = conf_stats(c, p_.caps);
      text_ << c.str() << " d=" << s.d << " p=" << s.p.str() << '\n';
    }
    text_ << "count=" << confs.size() << '\n';
  }
  return 0;
}

int Runner::rate(const std::string& which) {
  if (which == "special") {
    const auto s = poltyrev_special_config(p_.h, p_.g);
    const auto c = cmax_exponent(p_.h, p_.g);
    if (p_.as_json) {
      text_ << json{{"special", {{"value", s.value}, {"d", s.d}, {"p", s.p.str()}}},
                    {"cmax", {{"value", c.value}, {"d", c.d}, {"p", c.p.str()}}},
                    {"special_wins", root_less(c.p.value(), c.d - 1, s.p.value(), s.d - 1)}}
                   .dump(2)
            << '\n';
    } else {
      text_ << "special " << fixed(s.value, 6) << '\n' << "cmax " << fixed(c.value, 6) << '\n';
    }
    return 0;
  }
  RateReport r;
  if (which == "dr")
    r = rate_dr(p_.h);
  else if (which == "poltyrev")
    r = rate_poltyrev(p_.h);
  else if (which == "dist")
    r = rate_distribution(parse_distribution(p_.dist, std::max(p_.n0, 1)), p_.h, p_.caps);
  else if (which == "bhg")
    r = rate_bhg(p_.h, p_.g, p_.caps);
  else
    r = rate_bh_sharp(p_.h, p_.d, p_.caps);
  if (p_.as_json) {
    text_ << to_json(r).dump(2) << '\n';
  } else if (p_.as_csv) {
    text_ << to_csv(r);
  } else {
    text_ << "rate " << (r.vacuous ? std::string("vacuous") : fixed(r.rate, 12)) << '\n';
    if (r.argopt) text_ << "argopt " << r.argopt->str() << '\n';
  }
  return 0;
}

int Runner::simulate() {
  if (p_.n0 == 0) p_.n0 = 1;
  ConstructOptions opt;
  opt.n0 = p_.n0;
  opt.g = p_.g;
  opt.attempts = p_.attempts;
  opt.oracle = oracle();
  if (!p_.dist.empty()) opt.dist = parse_distribution(p_.dist, p_.n0);
  const auto result = bhlab::construct(p_.h, p_.n, p_.seed, opt);
  {
    std::ofstream file;
    write_code(sink(file, p_.out_path), result.code.words(), p_.h, p_.g == 1 ? "random" : "random-bhg");
  }
  std::ofstream file;
  sink(file, p_.stats_path) << to_json(result.stats).dump(2) << '\n';
  return 0;
}

int Runner::entropy(const std::string& which) {
  if (which == "renyi") {
    const auto dist = parse_distribution(p_.dist, p_.n0);
    text_ << fixed(renyi(dist, parse_alpha(p_.alpha)), 12) << '\n';
  } else if (which == "hfold") {
    const auto sum = hfold(parse_distribution(p_.dist, p_.n0), p_.h, p_.caps);
    for (std::size_t i = 0; i < sum.size(); ++i)
      text_ << element_str(sum.support()[i]) << ' ' << to_string(sum.mass(i)) << '\n';
  } else if (which == "hessian") {
    const double a = parse_alpha(p_.alpha);
    if (p_.fd) {
      const auto m = fd_hessian(p_.n, a);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          text_ << sci(static_cast<double>(m(i, j))) << (j + 1 < m.cols() ? "," : "\n");
    } else {
      const auto m = hessian_matrix(p_.n, a);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) text_ << sci(m(i, j)) << (j + 1 < m.cols() ? "," : "\n");
    }
  } else if (which == "roots") {
    const auto r = critical_alphas();
    text_ << "alpha_lower " << fixed(r.lower, 10) << '\n' << "alpha_upper " << fixed(r.upper, 10) << '\n';
  } else if (which == "sidon") {
    if (p_.scan.size() == 3) {
      text_ << "alpha,f2_half\n";
      const auto steps = static_cast<long>(std::floor((p_.scan[1] - p_.scan[0]) / p_.scan[2] + 0.5));
      for (long i = 0; i <= steps; ++i) {
        const double a = p_.scan[0] + static_cast<double>(i) * p_.scan[2];
        text_ << fixed(a, 6) << ',' << sci(sidon_curvature_at_half(a)) << '\n';
      }
    } else {
      const double a = parse_alpha(p_.alpha);
      const auto t = sidon_two_point(p_.p_point, a);
      text_ << "f " << sci(t.f) << "\nf1 " << sci(t.df) << "\nf2 " << sci(t.d2f) << '\n';
    }
  } else if (which == "search") {
    const auto r = uniform_optimality_search(p_.n, parse_alpha(p_.alpha), p_.h, p_.trials, p_.seed);
    std::ofstream file;
    sink(file, p_.out_path) << to_json(r).dump(2) << '\n';
  } else {
    const auto p = parse_sequence(p_.p_seq);
    text_ << "T " << sequence_str(rearrange_T(p)) << '\n';
    text_ << "S " << sequence_str(rearrange_S(p)) << '\n';
    text_ << "C " << sequence_str(shift_add_C(p, p_.shift)) << '\n';
    if (!p_.q_seq.empty())
      text_ << "majorized " << (is_majorized_by(p, parse_sequence(p_.q_seq)) ? "true" : "false") << '\n';
  }
  return 0;
}

void Runner::write_manifest(const std::vector<std::string>& args, const std::string& subcommand, double seconds) {
  json params = json::object();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0) continue;
    const bool has_value = i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0;
    params[args[i].substr(2)] = has_value ? args[i + 1] : "true";
  }
  json arts = json::array();
  arts.push_back({{"path", "-"}, {"fnv1a", hex64(fnv1a(text_.str()))}});
  for (const auto& path : artifacts_) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    arts.push_back({{"path", path}, {"fnv1a", hex64(fnv1a(buf.str()))}});
  }
  json seeds = json::array();
  if (params.contains("seed")) seeds.push_back(params["seed"]);
  json m{{"subcommand", subcommand}, {"argv", args},         {"params", params},
         {"seeds", seeds},           {"artifacts", arts},    {"tool_version", kToolVersion},
         {"wall_time", seconds}};
  std::ofstream f(p_.manifest, std::ios::binary);
  if (!f) throw Error(Errc::invalid_params, "cannot write " + p_.manifest);
  f << m.dump(2) << '\n';
}

int Runner::replay() {
  std::ifstream in(p_.input);
  if (!in) throw Error(Errc::invalid_params, "cannot read " + p_.input);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  auto args = m.at("argv").get<std::vector<std::string>>();
  const auto tmp = std::filesystem::temp_directory_path() / ("bhlab-replay-" + hex64(fnv1a(m.dump())));
  std::filesystem::create_directories(tmp);
  std::map<std::string, std::string> moved;
  int counter = 0;
  for (const auto& a : m.at("artifacts")) {
    const auto path = a.at("path").get<std::string>();
    if (path == "-") continue;
    moved[path] = (tmp / ("artifact" + std::to_string(counter++))).string();
  }
  for (auto& a : args)
    if (auto it = moved.find(a); it != moved.end()) a = it->second;
  std::ostringstream captured, errors;
  const int code = cli::run(args, captured, errors);
  bool same = true;
  for (const auto& a : m.at("artifacts")) {
    const auto path = a.at("path").get<std::string>();
    std::string data;
    if (path == "-") {
      data = captured.str();
    } else {
      std::ifstream f(moved[path], std::ios::binary);
      std::stringstream buf;
      buf << f.rdbuf();
      data = buf.str();
    }
    const auto got = hex64(fnv1a(data));
    const bool ok = got == a.at("fnv1a").get<std::string>();
    same = same && ok;
    text_ << (ok ? "match " : "differ ") << path << ' ' << got << '\n';
  }
  std::filesystem::remove_all(tmp);
  text_ << "exit " << code << '\n' << (same ? "replay identical" : "replay differs") << '\n';
  return same ? 0 : 1;
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"B_h code laboratory", "bhlab"};
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--manifest", p_.manifest, "write a run manifest to this path");
  app.add_option("--threads", p_.threads, "oracle threads (default BHLAB_THREADS or 1)");
  app.add_option("--cap-field-order", p_.caps.field_order);
  app.add_option("--cap-multisets", p_.caps.multisets);
  app.add_option("--cap-streaming-multisets", p_.caps.streaming_multisets);
  app.add_option("--cap-conf-cells", p_.caps.conf_cells);
  app.add_option("--cap-conf-variables", p_.caps.conf_variables);
  app.add_option("--cap-sharp-columns", p_.caps.sharp_columns);
  app.add_option("--cap-hfold-support", p_.caps.hfold_support);

  std::string subcommand;
  std::function<int()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& path, std::function<int()> fn) {
    auto* s = parent->add_subcommand(name);
    s->callback([&, path, fn] {
      subcommand = path;
      action = fn;
    });
    return s;
  };

  auto* construct_cmd = app.add_subcommand("construct", "explicit B_h sets");
  construct_cmd->require_subcommand(1);
  for (const std::string which : {"bose-chowla", "power-map"}) {
    auto* s = leaf(construct_cmd, which, "construct " + which, [this, which] { return construct(which); });
    s->add_option("--q", p_.q)->required();
    s->add_option("--h", p_.h)->required();
    s->add_flag("--binary", p_.binary);
    s->add_option("--out", p_.out_path);
  }

  auto* verify_cmd = app.add_subcommand("verify", "brute-force property oracles");
  verify_cmd->require_subcommand(1);
  for (const std::string which : {"bh", "bhg", "bhsharp"}) {
    auto* s = leaf(verify_cmd, which, "verify " + which, [this, which] { return verify(which); });
    s->add_option("--h", p_.h)->required();
    if (which == "bhg") s->add_option("--g", p_.g)->required();
    if (which == "bhsharp") s->add_option("--d", p_.d)->required();
    s->add_option("--input", p_.input)->required();
  }

  auto* configs_cmd = app.add_subcommand("configs", "configuration tables");
  configs_cmd->require_subcommand(1);
  {
    auto* s = leaf(configs_cmd, "enumerate", "configs enumerate", [this] { return configs(); });
    s->add_option("--k", p_.k, "rows (h for --sharp)")->required();
    s->add_option("--l", p_.l);
    s->add_flag("--sconf", p_.sconf);
    s->add_flag("--sharp", p_.sharp);
    s->add_option("--d", p_.d);
    s->add_flag("--json", p_.as_json);
  }

  auto* rate_cmd = app.add_subcommand("rate", "achievable rates");
  rate_cmd->require_subcommand(1);
  for (const std::string which : {"dr", "poltyrev", "dist", "bhg", "bhsharp", "special"}) {
    auto* s = leaf(rate_cmd, which, "rate " + which, [this, which] { return rate(which); });
    s->add_option("--h", p_.h)->required();
    if (which == "bhg" || which == "special") s->add_option("--g", p_.g)->required();
    if (which == "bhsharp") s->add_option("--d", p_.d)->required();
    if (which == "dist") {
      s->add_option("--dist", p_.dist, "masses such as 3/4,1/4")->required();
      s->add_option("--n0", p_.n0);
    }
    s->add_flag("--json", p_.as_json);
    s->add_flag("--csv", p_.as_csv);
  }

  {
    auto* s = leaf(&app, "simulate", "simulate", [this] { return simulate(); });
    s->add_option("--h", p_.h)->required();
    s->add_option("--n", p_.n)->required();
    s->add_option("--n0", p_.n0);
    s->add_option("--dist", p_.dist);
    s->add_option("--g", p_.g);
    s->add_option("--seed", p_.seed)->required();
    s->add_option("--attempts", p_.attempts);
    s->add_option("--out", p_.out_path);
    s->add_option("--stats", p_.stats_path);
  }

  auto* entropy_cmd = app.add_subcommand("entropy", "Renyi entropy and majorization");
  entropy_cmd->require_subcommand(1);
  for (const std::string which : {"renyi", "hfold", "hessian", "roots", "sidon", "search", "majorize"}) {
    auto* s = leaf(entropy_cmd, which, "entropy " + which, [this, which] { return entropy(which); });
    if (which == "renyi" || which == "hfold") {
      s->add_option("--dist", p_.dist)->required();
      s->add_option("--n0", p_.n0);
    }
    if (which == "hfold" || which == "search") s->add_option("--h", p_.h)->required();
    if (which == "renyi" || which == "hessian" || which == "sidon" || which == "search")
      s->add_option("--alpha", p_.alpha);
    if (which == "hessian" || which == "search") s->add_option("--n", p_.n)->required();
    if (which == "hessian") s->add_flag("--fd", p_.fd);
    if (which == "sidon") {
      s->add_option("--p", p_.p_point);
      s->add_option("--scan", p_.scan, "lo hi step")->expected(3);
    }
    if (which == "search") {
      s->add_option("--trials", p_.trials);
      s->add_option("--seed", p_.seed)->required();
      s->add_option("--out", p_.out_path);
    }
    if (which == "majorize") {
      s->add_option("--p", p_.p_seq)->required();
      s->add_option("--q", p_.q_seq);
      s->add_option("--c", p_.shift);
    }
  }

  {
    auto* s = leaf(&app, "replay", "replay", [this] { return replay(); });
    s->add_option("--manifest-file,--input", p_.input, "manifest to replay")->required();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? 0 : 2;
  }
  if (!action) {
    err_ << "error: no command\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    code = action();
  } catch (const Error& e) {
    out_ << text_.str();
    err_ << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    out_ << text_.str();
    err_ << "error: " << e.what() << '\n';
    return 2;
  }
  out_ << text_.str();
  if (!p_.manifest.empty()) {
    std::vector<std::string> replayable;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--manifest") {
        ++i;
        continue;
      }
      replayable.push_back(args[i]);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(replayable, subcommand, seconds);
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(args);
}

}  // namespace bhlab::cli
