#include "khinlab/psi.hpp"

#include "khinlab/numtheory.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace khinlab {

namespace {

struct ConstantNode {
  Rational value;
};

struct PowerNode {
  Rational c;
  Rational delta;
  std::uint64_t grid;
};

struct TableNode {
  std::map<std::uint64_t, Rational> table;
};

struct RestrictNode {
  PsiFunction inner;
  SupportPredicate support;
};

struct NormalizeNode {
  PsiFunction inner;
  Rational c;
};

const Rational kHalf(1, 2);

}  // namespace

struct PsiFunction::Node {
  std::variant<ConstantNode, PowerNode, TableNode, RestrictNode, NormalizeNode> body;
};

namespace {

Rational eval_power(const PowerNode& n, std::uint64_t q) {
  // k = floor(c * grid * q^(-p/s)) is the largest k with
  // k^s * cd^s * q^p <= (cn * grid)^s, i.e. the integer s-th root of the floor
  // of the right-hand ratio.
  const unsigned long p = mpz_get_ui(n.delta.num_ref().get_mpz_t());
  const unsigned long s = mpz_get_ui(n.delta.den_ref().get_mpz_t());
  BigInt top = n.c.num_ref() * from_uint64(n.grid);
  mpz_pow_ui(top.get_mpz_t(), top.get_mpz_t(), s);
  BigInt bottom;
  mpz_pow_ui(bottom.get_mpz_t(), n.c.den_ref().get_mpz_t(), s);
  BigInt qp;
  mpz_ui_pow_ui(qp.get_mpz_t(), q, p);
  bottom *= qp;
  const BigInt k = integer_root(BigInt(top / bottom), s);
  return make_rational(k, from_uint64(n.grid));
}

}  // namespace

PsiFunction::PsiFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Rational PsiFunction::operator()(std::uint64_t q) const {
  if (q == 0) return Rational(0);
  return std::visit(
      [q](const auto& n) -> Rational {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          return eval_power(n, q);
        } else if constexpr (std::is_same_v<T, TableNode>) {
          const auto it = n.table.find(q);
          return it == n.table.end() ? Rational(0) : it->second;
        } else if constexpr (std::is_same_v<T, RestrictNode>) {
          return n.support.contains(q) ? n.inner(q) : Rational(0);
        } else {
          Rational scaled = n.c * n.inner(q);
          return scaled > kHalf ? kHalf : scaled;
        }
      },
      node_->body);
}

PsiKind PsiFunction::kind() const {
  switch (node_->body.index()) {
    case 0: return PsiKind::constant;
    case 1: return PsiKind::power_decay;
    case 2: return PsiKind::explicit_table;
    case 3: return PsiKind::support_restricted;
    default: return PsiKind::normalized;
  }
}

std::string PsiFunction::describe() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantNode>) {
          return "const(" + to_string(n.value) + ")";
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          return "power(c=" + to_string(n.c) + ",delta=" + to_string(n.delta) +
                 ",grid=" + std::to_string(n.grid) + ")";
        } else if constexpr (std::is_same_v<T, TableNode>) {
          return "table(" + std::to_string(n.table.size()) + " entries)";
        } else if constexpr (std::is_same_v<T, RestrictNode>) {
          return "restrict(" + n.inner.describe() + "," + n.support.name + ")";
        } else {
          return "normalize(" + n.inner.describe() + ",c=" + to_string(n.c) + ")";
        }
      },
      node_->body);
}

std::optional<Rational> PsiFunction::decay_exponent() const {
  return std::visit(
      [](const auto& n) -> std::optional<Rational> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PowerNode>) {
          return n.delta;
        } else if constexpr (std::is_same_v<T, RestrictNode> || std::is_same_v<T, NormalizeNode>) {
          return n.inner.decay_exponent();
        } else {
          return std::nullopt;
        }
      },
      node_->body);
}

std::vector<Rational> PsiFunction::tabulate(std::uint64_t q_max) const {
  std::vector<Rational> out(q_max + 1);
  for (std::uint64_t q = 1; q <= q_max; ++q) out[q] = (*this)(q);
  return out;
}

PsiFunction constant_psi(Rational value) {
  if (value < 0) throw std::invalid_argument("constant_psi: negative value");
  return PsiFunction(std::make_shared<const PsiFunction::Node>(
      PsiFunction::Node{ConstantNode{std::move(value)}}));
}

PsiFunction power_psi(Rational c, Rational delta, std::uint64_t grid) {
  if (c <= 0) throw std::invalid_argument("power_psi: c must be positive");
  if (delta <= 0) throw std::invalid_argument("power_psi: delta must be positive");
  if (grid < 2) throw std::invalid_argument("power_psi: grid must be at least 2");
  if (!mpz_fits_ulong_p(delta.num_ref().get_mpz_t()) || !mpz_fits_ulong_p(delta.den_ref().get_mpz_t())) {
    throw std::invalid_argument("power_psi: delta numerator/denominator too large");
  }
  return PsiFunction(std::make_shared<const PsiFunction::Node>(
      PsiFunction::Node{PowerNode{std::move(c), std::move(delta), grid}}));
}

PsiFunction table_psi(std::map<std::uint64_t, Rational> table) {
  for (const auto& [q, v] : table) {
    if (q == 0) throw std::invalid_argument("table_psi: q must be positive");
    if (v < 0) throw std::invalid_argument("table_psi: negative value at q=" + std::to_string(q));
  }
  return PsiFunction(std::make_shared<const PsiFunction::Node>(
      PsiFunction::Node{TableNode{std::move(table)}}));
}

PsiFunction load_psi_table(std::istream& in) {
  std::map<std::uint64_t, Rational> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("psi table line " + std::to_string(line_no) + ": missing ','");
    }
    const std::string q_text = line.substr(0, comma);
    if (line_no == 1 && !q_text.empty() && (q_text[0] < '0' || q_text[0] > '9')) continue;
    std::uint64_t q = 0;
    try {
      std::size_t used = 0;
      q = std::stoull(q_text, &used);
      if (used != q_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("psi table line " + std::to_string(line_no) + ": bad q '" +
                                  q_text + "'");
    }
    if (!table.emplace(q, parse_rational(line.substr(comma + 1))).second) {
      throw std::invalid_argument("psi table: duplicate q=" + std::to_string(q));
    }
  }
  return table_psi(std::move(table));
}

PsiFunction load_psi_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open psi table '" + path + "'");
  return load_psi_table(in);
}

PsiFunction restrict_support(const PsiFunction& f, SupportPredicate support) {
  return PsiFunction(std::make_shared<const PsiFunction::Node>(
      PsiFunction::Node{RestrictNode{f, std::move(support)}}));
}

PsiFunction normalize(const PsiFunction& f, Rational c) {
  if (c <= 0 || c > 1) throw std::invalid_argument("normalize: c must lie in (0, 1]");
  return PsiFunction(std::make_shared<const PsiFunction::Node>(
      PsiFunction::Node{NormalizeNode{f, std::move(c)}}));
}

bool satisfies_decay(const Rational& psi_q, std::uint64_t q, const Rational& delta) {
  if (psi_q == 0) return true;
  return cmp_rpow(psi_q, Rational(from_uint64(q)), -delta) != std::strong_ordering::greater;
}

DecayCheck check_decay(const PsiFunction& f, const Rational& delta, std::uint64_t q_max) {
  if (delta <= 0) throw std::invalid_argument("check_decay: delta must be positive");
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    if (!satisfies_decay(f(q), q, delta)) return {false, q};
  }
  return {};
}

SupportPredicate SupportPredicate::all() {
  return {"all", [](std::uint64_t) { return true; }};
}
SupportPredicate SupportPredicate::none() {
  return {"none", [](std::uint64_t) { return false; }};
}
SupportPredicate SupportPredicate::primes() {
  return {"primes", [](std::uint64_t q) { return is_prime(q); }};
}
SupportPredicate SupportPredicate::even() {
  return {"even", [](std::uint64_t q) { return q % 2 == 0; }};
}
SupportPredicate SupportPredicate::odd() {
  return {"odd", [](std::uint64_t q) { return q % 2 == 1; }};
}
SupportPredicate SupportPredicate::up_to(std::uint64_t last) {
  return {"upto:" + std::to_string(last), [last](std::uint64_t q) { return q <= last; }};
}
SupportPredicate SupportPredicate::from(std::uint64_t first) {
  return {"from:" + std::to_string(first), [first](std::uint64_t q) { return q >= first; }};
}

}  // namespace khinlab
