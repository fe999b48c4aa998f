#include "khinlab/cli.hpp"

#include "khinlab/montecarlo.hpp"
#include "khinlab/parallel.hpp"
#include "khinlab/psi.hpp"
#include "khinlab/sets.hpp"
#include "khinlab/target.hpp"
#include "khinlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <ctime>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

namespace khinlab::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string output = "csv";
  int decimal = 0;
  unsigned jobs = 1;
  bool deterministic = false;

  std::string psi;
  std::string support = "all";
  std::string normalize;
  std::string y = "0,0";
  std::string delta = "1";
  std::string variant = "full";
  std::string variant_r;
  std::string a;
  std::optional<std::uint64_t> b;

  std::optional<std::uint64_t> q;
  std::optional<std::uint64_t> r;
  std::optional<std::uint64_t> q_max;
  std::string x;

  std::string lemma;
  std::string fault;
  bool all_pairs = false;
  bool profile = false;

  std::uint64_t q0 = 1;
  std::uint64_t q1 = 1;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  bool tilde = false;
};

// ---- parsing helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw UsageError("invalid " + what + ": '" + text + "'");
  }
  return std::stoull(text);
}

SupportPredicate parse_support(const std::string& text) {
  if (text == "all") return SupportPredicate::all();
  if (text == "none") return SupportPredicate::none();
  if (text == "primes") return SupportPredicate::primes();
  if (text == "even") return SupportPredicate::even();
  if (text == "odd") return SupportPredicate::odd();
  if (text.rfind("le:", 0) == 0) return SupportPredicate::up_to(parse_u64(text.substr(3), "support bound"));
  if (text.rfind("ge:", 0) == 0) return SupportPredicate::from(parse_u64(text.substr(3), "support bound"));
  throw UsageError("unknown support '" + text + "'");
}

PsiFunction parse_psi_spec(const std::string& spec) {
  if (spec.rfind("const:", 0) == 0) return constant_psi(parse_rational(spec.substr(6)));
  if (spec.rfind("table:", 0) == 0) return load_psi_table_file(spec.substr(6));
  if (spec.rfind("power:", 0) == 0) {
    const auto parts = split(spec.substr(6), ':');
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("power psi needs power:C:DELTA[:GRID]");
    const std::uint64_t grid = parts.size() == 3 ? parse_u64(parts[2], "grid") : kDefaultPsiGrid;
    return power_psi(parse_rational(parts[0]), parse_rational(parts[1]), grid);
  }
  return constant_psi(parse_rational(spec));
}

PsiFunction build_psi(const Options& o, const std::string& fallback = "") {
  const std::string spec = o.psi.empty() ? fallback : o.psi;
  if (spec.empty()) throw UsageError("--psi is required");
  PsiFunction f = parse_psi_spec(spec);
  if (o.support != "all") f = restrict_support(f, parse_support(o.support));
  if (!o.normalize.empty()) f = normalize(f, parse_rational(o.normalize));
  return f;
}

Target build_target(const Options& o) { return Target(parse_rational_pair(o.y), parse_rational(o.delta)); }

std::optional<ApproximantPair> override_approximant(const Options& o, std::uint64_t q) {
  if (o.a.empty() && !o.b) return std::nullopt;
  if (o.a.empty() || !o.b) throw UsageError("--a and --b must be given together");
  const auto [a1, a2] = parse_rational_pair(o.a);
  if (!a1.is_integer() || !a2.is_integer()) throw UsageError("--a must be two integers");
  return ApproximantPair{{to_int64(a1.num()), to_int64(a2.num())}, *o.b, q};
}

ApproximantPair approximant_for(const Options& o, const Target& t, std::uint64_t q) {
  if (auto p = override_approximant(o, q)) return *p;
  return t.approximant(q);
}

SetDescriptor build_descriptor(const Options& o, const Target& t, const PsiFunction& psi, std::uint64_t q,
                               Variant v) {
  if (v == Variant::tilde) {
    if (auto p = override_approximant(o, q)) return SetDescriptor::tilde(q, psi(q), t.y(), *p);
  }
  return SetDescriptor::from_target(t, psi, q, v);
}

std::vector<std::uint64_t> q_range(const Options& o, std::uint64_t default_max) {
  if (o.q) return {*o.q};
  const std::uint64_t hi = o.q_max.value_or(default_max);
  std::vector<std::uint64_t> qs;
  for (std::uint64_t q = 1; q <= hi; ++q) qs.push_back(q);
  return qs;
}

// ---- output

using Cell = std::variant<std::monostate, std::string, std::uint64_t, std::int64_t, bool, Rational>;

struct Column {
  std::string name;
  bool rational = false;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Rational>) {
          return to_string(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Rational>) {
          return to_string(v);
        } else {
          return v;
        }
      },
      c);
}

class Emitter {
 public:
  Emitter(std::ostream& out, const Options& o) : out_(out), opts_(o) {}

  bool json_mode() const { return opts_.output == "json"; }

  void provenance(const std::string& command, const std::vector<std::string>& args,
                  const std::uint64_t* seed) {
    std::string flags;
    for (const auto& a : args) flags += (flags.empty() ? "" : " ") + a;
    std::string stamp;
    if (!opts_.deterministic) {
      const std::time_t now = std::time(nullptr);
      std::tm tm{};
      gmtime_r(&now, &tm);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
      stamp = buf;
    }
    if (json_mode()) {
      json p = {{"artifact", "khinlab"}, {"version", KHINLAB_VERSION}, {"command", command}, {"flags", flags}};
      p["seed"] = nullptr;
      if (seed) p["seed"] = *seed;
      if (!opts_.deterministic) p["timestamp"] = stamp;
      out_ << json{{"provenance", p}}.dump() << "\n";
    } else {
      out_ << "# khinlab " << KHINLAB_VERSION << " command=" << command << " flags=\"" << flags
           << "\" seed=" << (seed ? std::to_string(*seed) : "none");
      if (!opts_.deterministic) out_ << " timestamp=" << stamp;
      out_ << "\n";
    }
  }

  void columns(std::vector<Column> cols) {
    cols_ = std::move(cols);
    if (json_mode()) return;
    std::string line;
    for (const auto& c : cols_) line += (line.empty() ? "" : ",") + c.name;
    if (opts_.decimal > 0) {
      for (const auto& c : cols_) {
        if (c.rational) line += "," + c.name + "_decimal";
      }
    }
    out_ << line << "\n";
  }

  void row(const std::vector<Cell>& cells) {
    if (json_mode()) {
      json obj = json::object();
      for (std::size_t i = 0; i < cols_.size(); ++i) obj[cols_[i].name] = cell_json(cells[i]);
      if (opts_.decimal > 0) {
        for (std::size_t i = 0; i < cols_.size(); ++i) {
          if (cols_[i].rational) obj[cols_[i].name + "_decimal"] = decimal(cells[i]);
        }
      }
      out_ << obj.dump() << "\n";
      return;
    }
    std::string line;
    for (std::size_t i = 0; i < cols_.size(); ++i) line += (i ? "," : "") + csv_field(cell_text(cells[i]));
    if (opts_.decimal > 0) {
      for (std::size_t i = 0; i < cols_.size(); ++i) {
        if (cols_[i].rational) line += "," + decimal(cells[i]);
      }
    }
    out_ << line << "\n";
  }

  void raw_json(const json& j) { out_ << j.dump() << "\n"; }

 private:
  std::string decimal(const Cell& c) const {
    if (const auto* r = std::get_if<Rational>(&c)) return to_decimal(*r, opts_.decimal);
    return "";
  }

  std::ostream& out_;
  const Options& opts_;
  std::vector<Column> cols_;
};

json report_json(const LemmaReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  json values = json::object();
  for (const auto& [k, v] : r.computed_values) values[k] = to_string(v);
  return {{"lemma_id", to_string(r.lemma_id)},
          {"parameters", params},
          {"hypothesis_satisfied", r.hypothesis_satisfied},
          {"conclusion_verified", r.conclusion_verified},
          {"witness", r.witness ? json(*r.witness) : json(nullptr)},
          {"computed_values", values}};
}

// ---- subcommands

int run_measure(const Options& o, Emitter& e) {
  const Target t = build_target(o);
  const PsiFunction psi = build_psi(o);
  const Variant v = parse_variant(o.variant);
  const auto d = build_descriptor(o, t, psi, *o.q, v);
  e.columns({{"q"}, {"variant"}, {"psi_q", true}, {"b"}, {"a1"}, {"a2"}, {"measure", true}});
  Cell b, a1, a2;
  if (d.approximant) {
    b = d.approximant->b;
    a1 = d.approximant->a.first;
    a2 = d.approximant->a.second;
  }
  e.row({d.q, to_string(v), d.psi_q, b, a1, a2, measure_closed_form(d)});
  return kExitOk;
}

int run_intersect(const Options& o, Emitter& e) {
  const Target t = build_target(o);
  const PsiFunction psi = build_psi(o);
  const Variant vq = parse_variant(o.variant);
  const Variant vr = parse_variant(o.variant_r.empty() ? o.variant : o.variant_r);
  const auto dq = build_descriptor(o, t, psi, *o.q, vq);
  const auto dr = build_descriptor(o, t, psi, *o.r, vr);
  e.columns({{"q"}, {"r"}, {"variant_q"}, {"variant_r"}, {"measure", true}});
  e.row({*o.q, *o.r, to_string(vq), to_string(vr), pair_intersection_measure(dq, dr)});
  return kExitOk;
}

int run_member(const Options& o, Emitter& e) {
  const Target t = build_target(o);
  const PsiFunction psi = build_psi(o);
  const Variant v = parse_variant(o.variant);
  const RationalPair x = parse_rational_pair(o.x);
  const auto d = build_descriptor(o, t, psi, *o.q, v);
  e.columns({{"q"}, {"variant"}, {"x1", true}, {"x2", true}, {"member"}});
  e.row({*o.q, to_string(v), x.first, x.second, member(x, d)});
  return kExitOk;
}

int run_approximant(const Options& o, Emitter& e) {
  const Target t = build_target(o);
  const auto qs = q_range(o, 1);
  std::vector<ApproximantPair> found(qs.size());
  parallel_for(qs.size(), o.jobs, [&](std::size_t i) { found[i] = t.approximant(qs[i]); });
  e.columns({{"q"}, {"b"}, {"a1"}, {"a2"}, {"error", true}, {"ok"}});
  int code = kExitOk;
  for (const auto& p : found) {
    const auto report = validate_approximant(t, p);
    if (!report.ok()) code = kExitFalsified;
    e.row({p.q, p.b, p.a.first, p.a.second, report.error, report.ok()});
  }
  return code;
}

struct LemmaLayout {
  std::vector<std::string> params;
  std::vector<std::string> values;
  bool hypothesis = true;
  bool witness = true;
};

LemmaLayout layout_for(LemmaId id) {
  switch (id) {
    case LemmaId::basic_size:
      return {{"q", "psi", "approximant"}, {"full_closed", "full_oracle", "tilde_closed", "tilde_oracle"}};
    case LemmaId::overlap:
      return {{"q", "r"}, {"ratio"}, false, false};
    case LemmaId::key:
      return {{"q", "r"}, {"psi_q", "psi_r", "b_q", "halfwidth_sum", "center_gap_bound", "intersection"}};
    case LemmaId::divisor_identity:
      return {{"q"}, {"lhs", "rhs"}, false, false};
    case LemmaId::divisor_bound:
      return {{"q", "delta"}, {"L_direct", "L", "M", "U", "tau"}, false, true};
    case LemmaId::ratio:
      return {{"Q"}, {"R"}};
  }
  return {};
}

std::vector<LemmaReport> collect_reports(const Options& o, LemmaId id) {
  const Rational delta = parse_rational(o.delta);
  std::vector<std::function<LemmaReport()>> jobs;

  switch (id) {
    case LemmaId::basic_size: {
      const Target t = build_target(o);
      const PsiFunction psi = build_psi(o);
      AuditOptions audit;
      audit.corrupt_euler_product = o.fault == "drop-coprime-condition";
      for (std::uint64_t q : q_range(o, 60)) {
        const auto p = approximant_for(o, t, q);
        jobs.emplace_back([=] { return verify_basic_size(q, psi(q), t.y(), p, audit); });
      }
      break;
    }
    case LemmaId::overlap: {
      const Target t = build_target(o);
      const PsiFunction psi = build_psi(o);
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      if (o.q && o.r) {
        pairs.emplace_back(*o.q, *o.r);
      } else {
        for (std::uint64_t q = 2; q <= o.q_max.value_or(100); ++q) {
          for (std::uint64_t r = 1; r < q; ++r) pairs.emplace_back(q, r);
        }
      }
      for (auto [q, r] : pairs) {
        jobs.emplace_back([=] {
          LemmaReport rep;
          rep.lemma_id = LemmaId::overlap;
          rep.parameters = {{"q", std::to_string(q)}, {"r", std::to_string(r)}};
          rep.hypothesis_satisfied = true;
          rep.computed_values = {{"ratio", overlap_ratio(q, r, psi, t)}};
          rep.conclusion_verified = true;
          return rep;
        });
      }
      break;
    }
    case LemmaId::key: {
      const Target t = build_target(o);
      const PsiFunction psi = build_psi(o, "power:1:" + to_string(delta));
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      if (o.q && o.r) {
        pairs.emplace_back(*o.q, *o.r);
      } else {
        for (std::uint64_t q = 2; q <= o.q_max.value_or(300); ++q) {
          for (std::uint64_t r = 1; r < q; ++r) {
            if (o.all_pairs || key_gcd_condition(q, r, delta)) pairs.emplace_back(q, r);
          }
        }
      }
      for (auto [q, r] : pairs) jobs.emplace_back([=] { return key_disjointness(q, r, psi, t); });
      break;
    }
    case LemmaId::divisor_identity:
      for (std::uint64_t q : q_range(o, 1000)) jobs.emplace_back([=] { return divisor_identity(q); });
      break;
    case LemmaId::divisor_bound:
      for (std::uint64_t q : q_range(o, 1000)) {
        jobs.emplace_back([=] { return restricted_divisor_bound(q, delta); });
      }
      break;
    case LemmaId::ratio: {
      const Target t = build_target(o);
      const PsiFunction psi = build_psi(o);
      const std::uint64_t q_max = o.q.value_or(o.q_max.value_or(100));
      return {quasi_independence_report(q_max, psi, t, o.jobs)};
    }
  }

  std::vector<LemmaReport> reports(jobs.size());
  parallel_for(jobs.size(), o.jobs, [&](std::size_t i) { reports[i] = jobs[i](); });
  return reports;
}

int run_verify(const Options& o, Emitter& e) {
  const LemmaId id = parse_lemma_id(o.lemma);
  if (!o.fault.empty()) {
    if (o.fault != "drop-coprime-condition") throw UsageError("unknown fault '" + o.fault + "'");
    if (id != LemmaId::basic_size) throw UsageError("--inject-fault applies to basic-size only");
  }
  const auto reports = collect_reports(o, id);
  const auto layout = layout_for(id);

  int code = kExitOk;
  for (const auto& r : reports) {
    if (r.falsified()) code = kExitFalsified;
  }

  if (e.json_mode()) {
    std::size_t ok = 0, vacuous = 0;
    for (const auto& r : reports) {
      e.raw_json(report_json(r));
      ok += r.conclusion_verified;
      vacuous += !r.hypothesis_satisfied;
    }
    e.raw_json({{"summary",
                 {{"lemma_id", to_string(id)},
                  {"points", reports.size()},
                  {"verified", ok},
                  {"hypothesis_failed", vacuous},
                  {"falsified", reports.size() - ok - vacuous}}}});
    return code;
  }

  std::vector<Column> cols;
  for (const auto& p : layout.params) cols.push_back({p});
  if (layout.hypothesis) cols.push_back({"hypothesis"});
  for (const auto& v : layout.values) cols.push_back({v, true});
  cols.push_back({"ok"});
  if (layout.witness) cols.push_back({"witness"});
  e.columns(cols);
  for (const auto& r : reports) {
    std::vector<Cell> cells;
    for (const auto& p : layout.params) {
      const auto it = std::find_if(r.parameters.begin(), r.parameters.end(),
                                   [&](const auto& kv) { return kv.first == p; });
      cells.emplace_back(it == r.parameters.end() ? Cell{} : Cell{it->second});
    }
    if (layout.hypothesis) cells.emplace_back(r.hypothesis_satisfied);
    for (const auto& v : layout.values) {
      const auto it = std::find_if(r.computed_values.begin(), r.computed_values.end(),
                                   [&](const auto& kv) { return kv.first == v; });
      cells.emplace_back(it == r.computed_values.end() ? Cell{} : Cell{it->second});
    }
    cells.emplace_back(!r.falsified());
    if (layout.witness) cells.emplace_back(r.witness ? Cell{*r.witness} : Cell{});
    e.row(cells);
  }
  return code;
}

int run_ratio(const Options& o, Emitter& e) {
  const Target t = build_target(o);
  const PsiFunction psi = build_psi(o);
  const std::uint64_t q_max = o.q_max.value_or(o.q.value_or(100));
  const auto profile = quasi_independence_profile(q_max, psi, t, o.jobs);
  e.columns({{"Q"}, {"R", true}, {"ok"}});
  int code = kExitOk;
  const std::uint64_t first = o.profile ? 1 : q_max;
  for (std::uint64_t q = first; q <= q_max; ++q) {
    const auto& value = profile[q - 1];
    const bool ok = !value || *value <= 1;
    if (!ok) code = kExitFalsified;
    e.row({q, value ? Cell{*value} : Cell{}, ok});
  }
  return code;
}

int run_estimate(const Options& o, Emitter& e) {
  if (o.q0 < 1 || o.q0 > o.q1) throw UsageError("need 1 <= q0 <= q1");
  const Target t = build_target(o);
  const PsiFunction psi = build_psi(o);
  const Variant v = o.tilde ? Variant::tilde : Variant::full;
  const SampleRun run = sample(o.n, o.seed);

  std::vector<QWindow> windows{{o.q0, o.q1}};
  for (std::uint64_t lo = o.q0; lo <= o.q1;) {
    std::uint64_t pow2 = 1;
    while (pow2 <= lo / 2) pow2 *= 2;
    const std::uint64_t hi = std::min(o.q1, 2 * pow2 - 1);
    windows.emplace_back(lo, hi);
    if (hi == o.q1) break;
    lo = hi + 1;
  }
  const auto fractions = window_hit_fractions(run, windows, psi, t, v, o.jobs);

  if (!e.json_mode()) {
    e.columns({{"q0"}, {"q1"}, {"fraction", true}});
    for (std::size_t i = 0; i < windows.size(); ++i) e.row({windows[i].first, windows[i].second, fractions[i]});
    return kExitOk;
  }
  json per_window = json::array();
  for (std::size_t i = 1; i < windows.size(); ++i) {
    json w = {{"q0", windows[i].first}, {"q1", windows[i].second}, {"fraction", to_string(fractions[i])}};
    if (o.decimal > 0) w["fraction_decimal"] = to_decimal(fractions[i], o.decimal);
    per_window.push_back(w);
  }
  json result = {{"q0", o.q0},
                 {"q1", o.q1},
                 {"n", o.n},
                 {"seed", o.seed},
                 {"variant", to_string(v)},
                 {"fraction", to_string(fractions[0])},
                 {"per_window", per_window}};
  if (o.decimal > 0) result["fraction_decimal"] = to_decimal(fractions[0], o.decimal);
  e.raw_json(result);
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--output", o.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--decimal", o.decimal, "append k-digit decimal columns")->check(CLI::Range(1, 200));
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--deterministic", o.deterministic, "omit the timestamp from the provenance header");
}

void add_psi(CLI::App* sub, Options& o) {
  sub->add_option("--psi", o.psi, "const:R | power:C:DELTA[:GRID] | table:PATH | R");
  sub->add_option("--support", o.support, "all|none|primes|even|odd|le:N|ge:N");
  sub->add_option("--normalize", o.normalize, "replace psi by min(C psi, 1/2)");
}

void add_target(CLI::App* sub, Options& o) {
  sub->add_option("--y", o.y, "shift Y1,Y2 in [0,1)");
  sub->add_option("--delta", o.delta, "decay exponent p/s");
}

void add_override(CLI::App* sub, Options& o) {
  sub->add_option("--a", o.a, "approximant numerators A1,A2 (with --b)");
  sub->add_option("--b", o.b, "approximant denominator (with --a)")->check(CLI::PositiveNumber);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact audit toolkit for shifted simultaneous approximation on the 2-torus", "khinlab"};
  app.require_subcommand(1);

  auto* measure = app.add_subcommand("measure", "closed-form measure of one set");
  add_common(measure, o);
  add_psi(measure, o);
  add_target(measure, o);
  add_override(measure, o);
  measure->add_option("--q", o.q)->required()->check(CLI::PositiveNumber);
  measure->add_option("--variant", o.variant, "full or tilde")->check(CLI::IsMember({"full", "tilde"}));

  auto* intersect = app.add_subcommand("intersect", "exact measure of a pair intersection");
  add_common(intersect, o);
  add_psi(intersect, o);
  add_target(intersect, o);
  add_override(intersect, o);
  intersect->add_option("--q", o.q)->required()->check(CLI::PositiveNumber);
  intersect->add_option("--r", o.r)->required()->check(CLI::PositiveNumber);
  intersect->add_option("--variant", o.variant, "variant of the q set")->check(CLI::IsMember({"full", "tilde"}));
  intersect->add_option("--variant-r", o.variant_r, "variant of the r set (default: --variant)")
      ->check(CLI::IsMember({"full", "tilde"}));

  auto* mem = app.add_subcommand("member", "exact membership of one point");
  add_common(mem, o);
  add_psi(mem, o);
  add_target(mem, o);
  add_override(mem, o);
  mem->add_option("--x", o.x, "point X1,X2")->required();
  mem->add_option("--q", o.q)->required()->check(CLI::PositiveNumber);
  mem->add_option("--variant", o.variant, "full or tilde")->check(CLI::IsMember({"full", "tilde"}));

  auto* approx = app.add_subcommand("approximant", "canonical approximant (a, b) per q");
  add_common(approx, o);
  add_target(approx, o);
  auto* approx_q = approx->add_option("--q", o.q)->check(CLI::PositiveNumber);
  approx->add_option("--q-max", o.q_max)->check(CLI::PositiveNumber)->excludes(approx_q);

  auto* verify = app.add_subcommand("verify-lemma", "audit one lemma over a parameter range");
  add_common(verify, o);
  add_psi(verify, o);
  add_target(verify, o);
  add_override(verify, o);
  verify->add_option("--id", o.lemma, "basic-size|overlap|key|divisor-identity|divisor-bound|ratio")
      ->required()
      ->check(CLI::IsMember({"basic-size", "overlap", "key", "divisor-identity", "divisor-bound", "ratio"}));
  verify->add_option("--q", o.q)->check(CLI::PositiveNumber);
  verify->add_option("--r", o.r)->check(CLI::PositiveNumber);
  verify->add_option("--q-max", o.q_max)->check(CLI::PositiveNumber);
  verify->add_option("--inject-fault", o.fault, "drop-coprime-condition");
  verify->add_flag("--all-pairs", o.all_pairs, "key: also report pairs failing the gcd condition");

  auto* ratio = app.add_subcommand("ratio", "quasi-independence ratio R(Q)");
  add_common(ratio, o);
  add_psi(ratio, o);
  add_target(ratio, o);
  ratio->add_option("--q-max", o.q_max)->required()->check(CLI::PositiveNumber);
  ratio->add_flag("--profile", o.profile, "one row for every Q up to --q-max");

  auto* estimate = app.add_subcommand("estimate-limsup", "Monte Carlo hit fraction over a window of q");
  add_common(estimate, o);
  add_psi(estimate, o);
  add_target(estimate, o);
  estimate->add_option("--q0", o.q0)->required()->check(CLI::PositiveNumber);
  estimate->add_option("--q1", o.q1)->required()->check(CLI::PositiveNumber);
  estimate->add_option("--n", o.n, "sample size")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", o.seed);
  estimate->add_flag("--tilde", o.tilde, "use the coprime-restricted sets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "estimate-limsup" && chosen->count("--output") == 0) o.output = "json";
  const std::uint64_t* seed = name == "estimate-limsup" ? &o.seed : nullptr;

  std::ostringstream buffer;
  Emitter emitter(buffer, o);
  int code = kExitOk;
  try {
    emitter.provenance(name, args, seed);
    if (name == "measure") {
      code = run_measure(o, emitter);
    } else if (name == "intersect") {
      code = run_intersect(o, emitter);
    } else if (name == "member") {
      code = run_member(o, emitter);
    } else if (name == "approximant") {
      if (!o.q && !o.q_max) throw UsageError("approximant needs --q or --q-max");
      code = run_approximant(o, emitter);
    } else if (name == "verify-lemma") {
      code = run_verify(o, emitter);
    } else if (name == "ratio") {
      code = run_ratio(o, emitter);
    } else {
      code = run_estimate(o, emitter);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << buffer.str();
  return code;
}

}  // namespace khinlab::cli
