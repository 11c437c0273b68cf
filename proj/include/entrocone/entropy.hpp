#pragma once

#include <array>
#include <bit>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "errors.hpp"
#include "support_enum.hpp"

namespace entrocone {

using Mask = unsigned;

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// Subset name in 1-based labels: mask 0b0101 -> "13".
inline std::string subset_name(Mask m) {
  std::string s;
  for (int v = 0; m; ++v, m >>= 1)
    if (m & 1u) s += std::to_string(v + 1);
  return s.empty() ? "0" : s;
}

/// A set function on the subsets of n variables, indexed by bitmask
/// (variable 0 is the least significant bit). f(empty) is fixed at 0.
template <class T>
class SetFunction {
 public:
  SetFunction() = default;
  explicit SetFunction(int n) : n_(n), v_(std::size_t{1} << n, T(0)) {
    if (n < 1 || n > 16) throw SizeError("set function needs 1..16 variables");
  }

  int n() const noexcept { return n_; }
  Mask full() const noexcept { return static_cast<Mask>(v_.size() - 1); }
  std::size_t size() const noexcept { return v_.size(); }

  const T& operator[](Mask m) const { return v_[m]; }
  T& operator[](Mask m) { return v_[m]; }
  const std::vector<T>& values() const noexcept { return v_; }

  /// The 2^n - 1 entries over nonempty subsets, ascending mask.
  std::vector<T> nonempty() const { return {v_.begin() + 1, v_.end()}; }

  static SetFunction from_nonempty(int n, const std::vector<T>& vals) {
    SetFunction f(n);
    if (vals.size() + 1 != f.size()) throw SizeError("expected 2^n - 1 entries");
    std::copy(vals.begin(), vals.end(), f.v_.begin() + 1);
    return f;
  }

  SetFunction& operator+=(const SetFunction& o) {
    check(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  SetFunction& operator-=(const SetFunction& o) {
    check(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  SetFunction& operator*=(const T& a) {
    for (auto& x : v_) x *= a;
    return *this;
  }
  friend SetFunction operator+(SetFunction a, const SetFunction& b) { return a += b; }
  friend SetFunction operator-(SetFunction a, const SetFunction& b) { return a -= b; }
  friend SetFunction operator*(const T& s, SetFunction a) { return a *= s; }
  friend bool operator==(const SetFunction&, const SetFunction&) = default;

  /// Conversion, e.g. exact rays to doubles.
  template <class U>
  SetFunction<U> cast() const {
    SetFunction<U> out(n_);
    for (std::size_t i = 0; i < v_.size(); ++i) out[static_cast<Mask>(i)] = convert<U>(v_[i]);
    return out;
  }

 private:
  template <class U>
  static U convert(const T& x) {
    if constexpr (std::is_same_v<T, boost::rational<long long>> && std::is_floating_point_v<U>)
      return boost::rational_cast<U>(x);
    else
      return static_cast<U>(x);
  }
  void check(const SetFunction& o) const {
    if (o.n_ != n_) throw SizeError("set functions over different variable counts");
  }

  int n_ = 0;
  std::vector<T> v_;
};

using Rational = boost::rational<long long>;
using EntropicVector = SetFunction<double>;
using RayVector = SetFunction<Rational>;

/// I(A;B|C) = f(AC) + f(BC) - f(ABC) - f(C) for variable masks.
template <class T>
T mutual_info(const SetFunction<T>& f, Mask a, Mask b, Mask c = 0) {
  return f[a | c] + f[b | c] - f[a | b | c] - f[c];
}

/// Relabel variables: variable v of f becomes variable perm[v].
template <class T>
SetFunction<T> permute_variables(const SetFunction<T>& f, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != f.n()) throw SizeError("variable permutation size mismatch");
  SetFunction<T> out(f.n());
  for (Mask m = 1; m <= f.full(); ++m) {
    Mask img = 0;
    for (int v = 0; v < f.n(); ++v)
      if (m & (1u << v)) img |= 1u << perm[v];
    out[img] = f[m];
  }
  return out;
}

/// A support plus a strictly positive probability vector over its atoms.
class Distribution {
 public:
  Distribution(Support support, std::vector<double> probs)
      : support_(std::move(support)), probs_(std::move(probs)) {
    if (static_cast<int>(probs_.size()) != support_.k())
      throw SizeError("probability vector length differs from atom count");
    double sum = 0;
    for (double p : probs_) {
      if (!(p > 0)) throw ArgumentError("atom probabilities must be strictly positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ArgumentError("atom probabilities must sum to 1");
  }

  const Support& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  int n() const noexcept { return support_.n(); }
  int k() const noexcept { return support_.k(); }

 private:
  Support support_;
  std::vector<double> probs_;
};

/// For every variable subset, the block index of each atom in the meet of
/// that subset's partitions. Built once per support and reused by the
/// optimizer's many entropy evaluations.
class MeetTable {
 public:
  explicit MeetTable(const Support& s) : n_(s.n()), k_(s.k()) {
    if (n_ > 16) throw SizeError("too many variables");
    const std::size_t masks = std::size_t{1} << n_;
    label_.assign(masks * k_, 0);
    blocks_.assign(masks, 1);
    for (Mask m = 1; m < masks; ++m) {
      int v = std::countr_zero(m);
      Mask rest = m & (m - 1);
      std::vector<int> combined(k_);
      for (int a = 0; a < k_; ++a) combined[a] = label_[rest * k_ + a] * kMaxAtoms + s[v].block_of(a);
      auto p = SetPartition::from_labels(combined);
      for (int a = 0; a < k_; ++a) label_[m * k_ + a] = p.block_of(a);
      blocks_[m] = p.block_count();
    }
  }

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

  /// Entropies in bits of every subset under atom probabilities p.
  EntropicVector entropies(std::span<const double> p) const {
    EntropicVector h(n_);
    entropies(p, h);
    return h;
  }

  /// Allocation-free variant for hot loops; h must have n variables.
  void entropies(std::span<const double> p, EntropicVector& h) const {
    double mass[kMaxAtoms];
    for (Mask m = 1; m < (1u << n_); ++m) {
      const int* lab = &label_[m * k_];
      std::fill(mass, mass + blocks_[m], 0.0);
      for (int a = 0; a < k_; ++a) mass[lab[a]] += p[a];
      // The heaviest block's log is taken from the mass of the others, which
      // keeps the entropy accurate next to a vertex of the simplex.
      int heavy = 0;
      for (int b = 1; b < blocks_[m]; ++b)
        if (mass[b] > mass[heavy]) heavy = b;
      double e = 0, rest = 0;
      for (int b = 0; b < blocks_[m]; ++b) {
        if (b == heavy || !(mass[b] > 0)) continue;
        e -= mass[b] * std::log2(mass[b]);
        rest += mass[b];
      }
      if (mass[heavy] > 0.5)
        e -= mass[heavy] * std::log1p(-rest) / std::numbers::ln2;
      else if (mass[heavy] > 0)
        e -= mass[heavy] * std::log2(mass[heavy]);
      h[m] = e;
    }
  }

 private:
  int n_, k_;
  std::vector<int> label_;
  std::vector<int> blocks_;
};

inline EntropicVector entropic_vector(const Distribution& d) {
  return MeetTable(d.support()).entropies(d.probs());
}

/// Integer linear functional on set functions, with a readable name.
struct LinearForm {
  std::vector<int> coeff;  // indexed by mask, coeff[0] unused
  std::string name;

  template <class T>
  T operator()(const SetFunction<T>& f) const {
    T acc(0);
    for (std::size_t m = 1; m < coeff.size(); ++m)
      if (coeff[m] != 0) acc += T(coeff[m]) * f[static_cast<Mask>(m)];
    return acc;
  }
};

/// h_N - h_{N\i} for each i, then h_iK + h_jK - h_K - h_ijK for i<j, K avoiding i,j.
inline std::vector<LinearForm> elemental_inequalities(int n) {
  if (n < 2 || n > 16) throw SizeError("elemental_inequalities: n must be in 2..16");
  const Mask full = (1u << n) - 1;
  const std::size_t len = std::size_t{1} << n;
  std::vector<LinearForm> out;
  for (int i = 0; i < n; ++i) {
    LinearForm f{std::vector<int>(len, 0), "H(N)-H(N\\" + std::to_string(i + 1) + ")"};
    f.coeff[full] += 1;
    f.coeff[full & ~(1u << i)] -= 1;
    out.push_back(std::move(f));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mask rest = full & ~((1u << i) | (1u << j));
      for (Mask K = 0;; K = (K - rest) & rest) {
        LinearForm f{std::vector<int>(len, 0), "I(" + std::to_string(i + 1) + ";" + std::to_string(j + 1) +
                                                   "|" + (K ? subset_name(K) : std::string("-")) + ")"};
        f.coeff[K | (1u << i)] += 1;
        f.coeff[K | (1u << j)] += 1;
        f.coeff[K | (1u << i) | (1u << j)] -= 1;
        if (K) f.coeff[K] -= 1;
        out.push_back(std::move(f));
        if (K == rest) break;
      }
    }
  return out;
}

/// Elemental inequalities violated by more than tol (exact when T is rational and tol is 0).
template <class T>
std::vector<LinearForm> in_shannon_cone(const SetFunction<T>& v, double tol = 1e-9) {
  std::vector<LinearForm> bad;
  std::vector<LinearForm> forms;
  if (v.n() == 1) forms.push_back({{0, 1}, "H(1)"});
  else forms = elemental_inequalities(v.n());
  for (auto& f : forms) {
    T val = f(v);
    bool violated;
    if constexpr (std::is_floating_point_v<T>) violated = val < -tol;
    else violated = val < T(0) && boost::rational_cast<double>(-val) > tol;
    if (violated) bad.push_back(std::move(f));
  }
  return bad;
}

namespace detail {
template <class T>
void require_four(const SetFunction<T>& v) {
  if (v.n() != 4) throw ArityError("this functional is defined for exactly 4 variables");
}
}  // namespace detail

/// Ingleton_ij = I(k;l|i) + I(k;l|j) + I(i;j) - I(k;l), with {k,l} the other
/// two variables. Indices are 0-based.
template <class T>
T ingleton(const SetFunction<T>& v, int i, int j) {
  detail::require_four(v);
  if (i == j || i < 0 || j < 0 || i > 3 || j > 3) throw ArgumentError("ingleton needs two distinct indices in 0..3");
  Mask I = 1u << i, J = 1u << j;
  Mask rest = 0xFu & ~(I | J);
  Mask K = rest & (~rest + 1), L = rest & ~K;
  return mutual_info(v, K, L, I) + mutual_info(v, K, L, J) + mutual_info(v, I, J) - mutual_info(v, K, L);
}

/// The six unordered pairs in a fixed order.
inline constexpr std::array<std::pair<int, int>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Min over the six pairs of Ingleton_ij / h_N; +inf when h_N is zero.
inline double ingleton_score(const EntropicVector& h) {
  detail::require_four(h);
  double hn = h[0xF];
  if (!(hn > 1e-15)) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (auto [i, j] : kPairs) best = std::min(best, ingleton(h, i, j));
  return best / hn;
}

inline double ingleton_score(const Distribution& d) { return ingleton_score(entropic_vector(d)); }

/// Zhang-Yeung slack I(A;B) + I(A;CD) + 3I(C;D|A) + I(C;D|B) - 2I(C;D);
/// perm gives the variables playing A, B, C, D.
template <class T>
T zhang_yeung(const SetFunction<T>& v, std::array<int, 4> perm = {0, 1, 2, 3}) {
  detail::require_four(v);
  Mask A = 1u << perm[0], B = 1u << perm[1], C = 1u << perm[2], D = 1u << perm[3];
  return mutual_info(v, A, B) + mutual_info(v, A, C | D) + T(3) * mutual_info(v, C, D, A) +
         mutual_info(v, C, D, B) - T(2) * mutual_info(v, C, D);
}

/// Left side of the s-th Matus inequality,
/// s[I(A;B|C) + I(A;B|D) + I(C;D) - I(A;B)] + I(B;C|A) + s(s+1)/2 [I(A;C|B) + I(A;B|C)].
template <class T>
T matus_slack(const SetFunction<T>& v, int s, std::array<int, 4> perm = {0, 1, 2, 3}) {
  detail::require_four(v);
  if (s < 1) throw ArgumentError("matus_slack: s must be a positive integer");
  Mask A = 1u << perm[0], B = 1u << perm[1], C = 1u << perm[2], D = 1u << perm[3];
  T ts(s);
  return ts * (mutual_info(v, A, B, C) + mutual_info(v, A, B, D) + mutual_info(v, C, D) - mutual_info(v, A, B)) +
         mutual_info(v, B, C, A) + T(s * (s + 1) / 2) * (mutual_info(v, A, C, B) + mutual_info(v, A, B, C));
}

/// The Matus family at s = 1 is Zhang-Yeung with the roles (A,B,C,D) -> (C,D,A,B).
inline std::array<int, 4> matus_to_zhang_yeung(std::array<int, 4> perm) {
  return {perm[2], perm[3], perm[0], perm[1]};
}

/// A couple (i,j|K) with i,j not in K; i == j is allowed. Stored 0-based
/// with i <= j, printed 1-based.
struct Couple {
  int i;
  int j;
  Mask K;

  std::string to_string() const {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "|" + (K ? subset_name(K) : std::string()) + ")";
  }
  auto operator<=>(const Couple&) const = default;

  template <class T>
  T value(const SetFunction<T>& f) const {
    return mutual_info(f, Mask{1u << i}, Mask{1u << j}, K);
  }
};

inline std::vector<Couple> all_couples(int n) {
  std::vector<Couple> out;
  const Mask full = (1u << n) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mask rest = full & ~((1u << i) | (1u << j));
      for (Mask K = 0;; K = (K - rest) & rest) {
        out.push_back({i, j, K});
        if (K == rest) break;
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Couples whose functional f_iK + f_jK - f_ijK - f_K vanishes (|value| <= tol).
template <class T>
std::set<Couple> semimatroid_of(const SetFunction<T>& f, double tol = 1e-9) {
  std::set<Couple> out;
  for (const auto& c : all_couples(f.n())) {
    T val = c.value(f);
    double mag;
    if constexpr (std::is_floating_point_v<T>) mag = std::abs(val);
    else mag = std::abs(boost::rational_cast<double>(val));
    if (mag <= tol) out.insert(c);
  }
  return out;
}

/// Column header "h_1,h_2,h_12,..." for the CSV schema.
inline std::string csv_header(int n) {
  std::string s;
  for (Mask m = 1; m < (1u << n); ++m) s += (m > 1 ? ",h_" : "h_") + subset_name(m);
  return s;
}

template <class T>
void write_csv_row(std::ostream& os, const SetFunction<T>& f) {
  for (Mask m = 1; m <= f.full(); ++m) {
    if (m > 1) os << ',';
    if constexpr (std::is_floating_point_v<T>) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", f[m]);
      os << buf;
    } else {
      os << f[m].numerator();
      if (f[m].denominator() != 1) os << '/' << f[m].denominator();
    }
  }
  os << '\n';
}

}  // namespace entrocone
