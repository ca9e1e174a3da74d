#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xtc {

using Rational = boost::multiprecision::cpp_rational;
using Assignment = std::map<std::string, Rational>;
using IntAssignment = std::map<std::string, std::int64_t>;

class LinTerm {
 public:
  LinTerm() = default;
  explicit LinTerm(Rational c) : constant_(std::move(c)) {}
  static LinTerm var(const std::string& x, Rational c = 1);

  const std::map<std::string, Rational>& coefficients() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coefficient(const std::string& x) const;
  bool is_constant() const { return coeffs_.empty(); }

  LinTerm& operator+=(const LinTerm& o);
  LinTerm& operator-=(const LinTerm& o);
  LinTerm& operator*=(const Rational& k);
  friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
  friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
  friend LinTerm operator*(LinTerm a, const Rational& k) { return a *= k; }
  friend bool operator==(const LinTerm&, const LinTerm&) = default;

  Rational eval(const Assignment& v) const;  // throws UnboundVariable

 private:
  std::map<std::string, Rational> coeffs_;  // no zero entries
  Rational constant_ = 0;
};

std::string to_string(const LinTerm& t);
std::string to_string(const Rational& r);

enum class Rel { Lt, Gt, Eq };

// term rel 0
struct LinAtom {
  LinTerm term;
  Rel rel;
  friend bool operator==(const LinAtom&, const LinAtom&) = default;
};

class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static Formula truth();
  static Formula falsity();
  static Formula atom(LinAtom a);
  // lhs op rhs with op in < > = <= >=; <= and >= become negated > and <.
  static Formula compare(const LinTerm& lhs, std::string_view op, const LinTerm& rhs);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);

  Kind kind() const { return rep_->kind; }
  const LinAtom& atom() const { return rep_->atom; }
  const std::vector<Formula>& parts() const { return rep_->parts; }

 private:
  struct Rep {
    Kind kind;
    LinAtom atom;
    std::vector<Formula> parts;
  };
  explicit Formula(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

Formula operator!(const Formula& f);
Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);

bool eval(const Formula& f, const Assignment& v);
bool eval(const Formula& f, const IntAssignment& v);
std::set<std::string> variables(const Formula& f);
std::vector<LinAtom> atoms(const Formula& f);
std::size_t formula_size(const Formula& f);

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

// Eliminates x from ∃x.Φ; the result does not mention x.
Formula qe_eliminate(const Formula& f, const std::string& x);
// Eliminates the last variable in name order.
Formula qe_eliminate_last(const Formula& f);

std::optional<Assignment> rational_satisfiable(const Formula& f);

struct IntRange {
  std::int64_t lo;
  std::int64_t hi;
};
using Box = std::map<std::string, IntRange>;

inline constexpr std::uint64_t kDefaultBoxCap = 10'000'000;

// Lexicographic scan (first variable slowest). Variables of f missing from the box are an error.
std::optional<IntAssignment> integer_feasible_box(const Formula& f, const Box& box,
                                                  std::uint64_t cap = kDefaultBoxCap);

// Φ1 ∧ ¬Φ2 where Φ1 fixes some counts and lower-bounds (strictly) the rest.
struct CountingSystem {
  std::vector<std::string> vars;
  std::map<std::string, std::uint64_t> fixed;
  std::map<std::string, std::uint64_t> above;  // x > k
  Formula phi2 = Formula::truth();

  Formula phi1() const;
  Formula target() const { return phi1() && !phi2; }
};

std::optional<IntAssignment> counting_feasible(const CountingSystem& s, std::uint64_t k_in,
                                               std::uint64_t i_out_max);

enum class Feasibility { Feasible, Infeasible, Unknown };

struct IntResult {
  Feasibility status = Feasibility::Unknown;
  IntAssignment witness;
  std::string note;
};

struct CellOptions {
  std::int64_t bound_search_limit = 1 << 12;  // largest distance probed when bounding a cell
  std::size_t max_iterations = 100000;
  std::uint64_t box_cap = 2'000'000;
};

IntResult integer_feasible_cells(const Formula& f, const CellOptions& opts = {});
IntResult positive_integer_feasible(const Formula& f, const CellOptions& opts = {});

}  // namespace xtc
