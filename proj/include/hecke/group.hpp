#ifndef HECKE_GROUP_HPP
#define HECKE_GROUP_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hecke/error.hpp"
#include "hecke/rational.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Bijection of {0, ..., n-1}; images[i] is the image of i.
struct Perm {
  std::vector<std::uint32_t> images;
  bool operator==(const Perm&) const = default;
};

/// Row-major n x n matrix with rational entries and nonzero determinant.
struct RatMatrix {
  std::size_t dim = 0;
  std::vector<Rat> entries;

  const Rat& at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
  Rat& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
  bool operator==(const RatMatrix&) const = default;
};

/// The map x -> a x + b with a > 0.
struct Affine {
  Rat a{1};
  Rat b{0};
  bool operator==(const Affine&) const = default;
};

/// x^{e0} t^{s1} x^{e1} ... t^{sk} x^{ek} in Britton-reduced range form.
/// exponents.size() == t_signs.size() + 1, every t_sign is +1 or -1.
struct BSWord {
  std::vector<BigInt> exponents{BigInt(0)};
  std::vector<int> t_signs;
  bool operator==(const BSWord&) const = default;
};

using GroupElem = std::variant<Perm, RatMatrix, Affine, BSWord>;

/// One letter of an unreduced Baumslag-Solitar word: 'x' or 't' raised to a power.
struct BSLetter {
  char symbol = 'x';
  BigInt power{1};
};

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

struct PermFamily {
  std::size_t degree = 0;
  bool operator==(const PermFamily&) const = default;
};

struct MatrixFamily {
  std::size_t dim = 2;
  bool special = true;  // det = 1 when true, any nonzero det otherwise
  bool operator==(const MatrixFamily&) const = default;
};

struct AffineFamily {
  bool operator==(const AffineFamily&) const = default;
};

struct BSFamily {
  std::int64_t m = 1;
  std::int64_t n = 1;
  bool operator==(const BSFamily&) const = default;
};

using Family = std::variant<PermFamily, MatrixFamily, AffineFamily, BSFamily>;

inline std::string family_name(const Family& f) {
  return std::visit(
      [](const auto& fam) -> std::string {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, PermFamily>) {
          return "Perm(" + std::to_string(fam.degree) + ")";
        } else if constexpr (std::is_same_v<F, MatrixFamily>) {
          return (fam.special ? "SL(" : "GL(") + std::to_string(fam.dim) + ",Q)";
        } else if constexpr (std::is_same_v<F, AffineFamily>) {
          return "AffineQ";
        } else {
          return "BS(" + std::to_string(fam.m) + "," + std::to_string(fam.n) + ")";
        }
      },
      f);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string perm_to_string(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.images.size(), false);
  for (std::size_t i = 0; i < p.images.size(); ++i) {
    if (seen[i] || p.images[i] == i) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += ' ';
      out += std::to_string(j);
      first = false;
      j = p.images[j];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

inline std::string matrix_to_string(const RatMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.dim; ++r) {
    if (r) out += ',';
    out += '[';
    for (std::size_t c = 0; c < m.dim; ++c) {
      if (c) out += ',';
      out += to_string(m.at(r, c));
    }
    out += ']';
  }
  return out + "]";
}

inline std::string bs_to_string(const BSWord& w) {
  std::string out;
  auto emit = [&out](std::string token) {
    if (!out.empty()) out += ' ';
    out += token;
  };
  auto emit_x = [&emit](const BigInt& e) {
    if (e == 0) return;
    emit(e == 1 ? std::string("x") : "x^" + e.str());
  };
  for (std::size_t i = 0; i < w.t_signs.size(); ++i) {
    emit_x(w.exponents[i]);
    emit(w.t_signs[i] > 0 ? "t" : "t^-1");
  }
  emit_x(w.exponents.back());
  return out.empty() ? "e" : out;
}

}  // namespace detail

/// Canonical text form: cycles for permutations, `[[p/q,...],...]` for
/// matrices, `(a,b)` for affine maps, `x^a t^e` tokens for BS words.
inline std::string to_string(const GroupElem& g) {
  return std::visit(
      [](const auto& e) -> std::string {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, Perm>) {
          return detail::perm_to_string(e);
        } else if constexpr (std::is_same_v<E, RatMatrix>) {
          return detail::matrix_to_string(e);
        } else if constexpr (std::is_same_v<E, Affine>) {
          return "(" + to_string(e.a) + "," + to_string(e.b) + ")";
        } else {
          return detail::bs_to_string(e);
        }
      },
      g);
}

/// Total order: lexicographic on the canonical serialization.
inline std::strong_ordering cmp(const GroupElem& a, const GroupElem& b) {
  if (a.index() != b.index()) throw Error(ErrorCode::FamilyMismatch, "cmp across families");
  auto sa = to_string(a);
  auto sb = to_string(b);
  return sa <=> sb;
}

struct ElemLess {
  bool operator()(const GroupElem& a, const GroupElem& b) const { return cmp(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Family arithmetic
// ---------------------------------------------------------------------------

namespace detail {

inline Rat determinant(const RatMatrix& m) {
  std::vector<Rat> a = m.entries;
  const std::size_t n = m.dim;
  Rat det{1};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) return Rat{0};
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r * n + col] == 0) continue;
      Rat f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

inline RatMatrix matrix_mul(const RatMatrix& x, const RatMatrix& y) {
  RatMatrix out{x.dim, std::vector<Rat>(x.dim * x.dim)};
  for (std::size_t r = 0; r < x.dim; ++r)
    for (std::size_t k = 0; k < x.dim; ++k) {
      if (x.at(r, k) == 0) continue;
      for (std::size_t c = 0; c < x.dim; ++c) out.at(r, c) += x.at(r, k) * y.at(k, c);
    }
  return out;
}

inline RatMatrix matrix_identity(std::size_t n) {
  RatMatrix out{n, std::vector<Rat>(n * n)};
  for (std::size_t i = 0; i < n; ++i) out.at(i, i) = 1;
  return out;
}

inline RatMatrix matrix_inverse(const RatMatrix& m) {
  const std::size_t n = m.dim;
  RatMatrix a = m;
  RatMatrix inv = matrix_identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorCode::SingularMatrix, "matrix is not invertible");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a.at(pivot, c), a.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    Rat p = a.at(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a.at(col, c) /= p;
      inv.at(col, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a.at(r, col) == 0) continue;
      Rat f = a.at(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        a.at(r, c) -= f * a.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

/// Britton reduction followed by range reduction; the result is the unique
/// normal form of the word in BS(m, n) = <t, x | t^-1 x^m t = x^n>.
inline BSWord bs_normal_form(std::span<const BSLetter> letters, std::int64_t m_, std::int64_t n_) {
  const BigInt m(m_), n(n_);
  BSWord w;
  for (const auto& letter : letters) {
    if (letter.symbol == 'x') {
      w.exponents.back() += letter.power;
      continue;
    }
    const int step = letter.power > 0 ? 1 : -1;
    BigInt count = letter.power > 0 ? letter.power : BigInt(-letter.power);
    for (; count > 0; --count) {
      if (!w.t_signs.empty() && w.t_signs.back() == -step) {
        const BigInt& a = w.exponents.back();
        if (step == 1 && a % m == 0) {  // t^-1 x^a t = x^{a n / m}
          BigInt merged = a / m * n;
          w.exponents.pop_back();
          w.t_signs.pop_back();
          w.exponents.back() += merged;
          continue;
        }
        if (step == -1 && a % n == 0) {  // t x^a t^-1 = x^{a m / n}
          BigInt merged = a / n * m;
          w.exponents.pop_back();
          w.t_signs.pop_back();
          w.exponents.back() += merged;
          continue;
        }
      }
      w.t_signs.push_back(step);
      w.exponents.emplace_back(0);
    }
  }
  // x^{mq} t = t x^{nq} and x^{nq} t^-1 = t^-1 x^{mq}
  for (std::size_t i = 0; i < w.t_signs.size(); ++i) {
    const BigInt& mod = w.t_signs[i] > 0 ? m : n;
    const BigInt& other = w.t_signs[i] > 0 ? n : m;
    BigInt q = floor_div(w.exponents[i], mod);
    w.exponents[i] -= q * mod;
    w.exponents[i + 1] += q * other;
  }
  return w;
}

inline std::vector<BSLetter> bs_letters(const BSWord& w) {
  std::vector<BSLetter> out;
  out.reserve(2 * w.exponents.size());
  for (std::size_t i = 0; i < w.t_signs.size(); ++i) {
    if (w.exponents[i] != 0) out.push_back({'x', w.exponents[i]});
    out.push_back({'t', BigInt(w.t_signs[i])});
  }
  if (w.exponents.back() != 0) out.push_back({'x', w.exponents.back()});
  return out;
}

inline std::vector<BSLetter> parse_bs_letters(std::string_view text) {
  std::vector<BSLetter> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '*' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (text.substr(i) == "e" || text.substr(i) == "1" || i == text.size()) return out;
  while (i < text.size()) {
    char c = text[i];
    if (c != 'x' && c != 't')
      throw Error(ErrorCode::MalformedInput, "unexpected '" + std::string(1, c) + "' in BS word");
    ++i;
    BigInt power(1);
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool braced = i < text.size() && text[i] == '{';
      if (braced) ++i;
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      power = parse_bigint(text.substr(start, i - start));
      if (braced) {
        if (i >= text.size() || text[i] != '}')
          throw Error(ErrorCode::MalformedInput, "unclosed brace in BS word");
        ++i;
      }
    }
    out.push_back({c, power});
    skip_ws();
  }
  return out;
}

inline std::vector<std::string> split_top_level(std::string_view body) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    if (c != ' ') cur += c;
  }
  parts.push_back(cur);
  return parts;
}

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GroupCtx
// ---------------------------------------------------------------------------

/// A group family together with a finite generating list. The stored list is
/// closed under inverses.
class GroupCtx {
 public:
  GroupCtx() : family_(AffineFamily{}) {}

  GroupCtx(Family family, const std::vector<GroupElem>& generators) : family_(std::move(family)) {
    std::visit(
        [](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, BSFamily>) {
            if (f.m < 1 || f.n < 1) throw Error(ErrorCode::MalformedInput, "BS(m,n) needs m,n >= 1");
          } else if constexpr (std::is_same_v<F, MatrixFamily>) {
            if (f.dim == 0) throw Error(ErrorCode::MalformedInput, "matrix dimension 0");
          }
        },
        family_);
    std::unordered_set<std::string> seen;
    auto add = [&](GroupElem g) {
      if (is_identity(g)) return;
      if (seen.insert(to_string(g)).second) generators_.push_back(std::move(g));
    };
    for (const auto& g : generators) {
      validate(g);
      primary_.push_back(normal_form(g));
    }
    for (const auto& g : primary_) add(g);
    for (const auto& g : primary_) add(inv(g));
  }

  const Family& family() const noexcept { return family_; }

  /// Symmetric generating set (given generators first, then new inverses).
  std::span<const GroupElem> generators() const noexcept { return generators_; }
  /// The generators as supplied, normalized.
  std::span<const GroupElem> primary_generators() const noexcept { return primary_; }

  bool is_finite_family() const noexcept { return std::holds_alternative<PermFamily>(family_); }

  GroupElem identity() const {
    return std::visit(
        [](const auto& f) -> GroupElem {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, PermFamily>) {
            Perm p;
            p.images.resize(f.degree);
            std::iota(p.images.begin(), p.images.end(), 0u);
            return p;
          } else if constexpr (std::is_same_v<F, MatrixFamily>) {
            return detail::matrix_identity(f.dim);
          } else if constexpr (std::is_same_v<F, AffineFamily>) {
            return Affine{};
          } else {
            return BSWord{};
          }
        },
        family_);
  }

  bool is_identity(const GroupElem& g) const { return g == identity(); }

  /// Throws FamilyMismatch / MalformedInput / SingularMatrix when g does not
  /// belong to this family.
  void validate(const GroupElem& g) const {
    std::visit(
        [&g](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, PermFamily>) {
            const auto* p = std::get_if<Perm>(&g);
            if (!p || p->images.size() != f.degree)
              throw Error(ErrorCode::FamilyMismatch, "expected a permutation of degree " + std::to_string(f.degree));
            std::vector<bool> hit(f.degree, false);
            for (auto v : p->images) {
              if (v >= f.degree || hit[v]) throw Error(ErrorCode::MalformedInput, "not a bijection");
              hit[v] = true;
            }
          } else if constexpr (std::is_same_v<F, MatrixFamily>) {
            const auto* m = std::get_if<RatMatrix>(&g);
            if (!m || m->dim != f.dim || m->entries.size() != f.dim * f.dim)
              throw Error(ErrorCode::FamilyMismatch, "expected a " + std::to_string(f.dim) + "x" + std::to_string(f.dim) + " matrix");
            Rat det = detail::determinant(*m);
            if (det == 0) throw Error(ErrorCode::SingularMatrix, "determinant is zero");
            if (f.special && det != 1) throw Error(ErrorCode::SingularMatrix, "determinant is not 1");
          } else if constexpr (std::is_same_v<F, AffineFamily>) {
            const auto* a = std::get_if<Affine>(&g);
            if (!a) throw Error(ErrorCode::FamilyMismatch, "expected an affine pair");
            if (a->a <= 0) throw Error(ErrorCode::MalformedInput, "affine dilation must be positive");
          } else {
            const auto* w = std::get_if<BSWord>(&g);
            if (!w) throw Error(ErrorCode::FamilyMismatch, "expected a BS word");
            if (w->exponents.size() != w->t_signs.size() + 1)
              throw Error(ErrorCode::MalformedInput, "BS word shape");
            for (int s : w->t_signs)
              if (s != 1 && s != -1) throw Error(ErrorCode::MalformedInput, "t exponent must be +-1");
          }
        },
        family_);
  }

  /// Canonical form of a (possibly unreduced) element of this family.
  GroupElem normal_form(const GroupElem& g) const {
    validate(g);
    if (const auto* w = std::get_if<BSWord>(&g)) return normal_form_word(detail::bs_letters(*w));
    return g;
  }

  /// Canonical form of a raw Baumslag-Solitar word.
  GroupElem normal_form_word(std::span<const BSLetter> letters) const {
    const auto* f = std::get_if<BSFamily>(&family_);
    if (!f) throw Error(ErrorCode::FamilyMismatch, "letter words exist only in BS(m,n)");
    for (const auto& l : letters)
      if (l.symbol != 'x' && l.symbol != 't') throw Error(ErrorCode::MalformedInput, "unknown letter");
    return detail::bs_normal_form(letters, f->m, f->n);
  }

  GroupElem mul(const GroupElem& a, const GroupElem& b) const {
    check_same(a, b);
    return std::visit(
        [&](const auto& x) -> GroupElem {
          using E = std::decay_t<decltype(x)>;
          const auto& y = std::get<E>(b);
          if constexpr (std::is_same_v<E, Perm>) {
            Perm out;
            out.images.resize(x.images.size());
            for (std::size_t i = 0; i < x.images.size(); ++i) out.images[i] = x.images[y.images[i]];
            return out;
          } else if constexpr (std::is_same_v<E, RatMatrix>) {
            return detail::matrix_mul(x, y);
          } else if constexpr (std::is_same_v<E, Affine>) {
            return Affine{x.a * y.a, x.a * y.b + x.b};
          } else {
            auto letters = detail::bs_letters(x);
            auto rhs = detail::bs_letters(y);
            letters.insert(letters.end(), rhs.begin(), rhs.end());
            return normal_form_word(letters);
          }
        },
        a);
  }

  GroupElem inv(const GroupElem& a) const {
    check_family(a);
    return std::visit(
        [&](const auto& x) -> GroupElem {
          using E = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<E, Perm>) {
            Perm out;
            out.images.resize(x.images.size());
            for (std::size_t i = 0; i < x.images.size(); ++i) out.images[x.images[i]] = static_cast<std::uint32_t>(i);
            return out;
          } else if constexpr (std::is_same_v<E, RatMatrix>) {
            return detail::matrix_inverse(x);
          } else if constexpr (std::is_same_v<E, Affine>) {
            return Affine{1 / x.a, -x.b / x.a};
          } else {
            auto letters = detail::bs_letters(x);
            std::reverse(letters.begin(), letters.end());
            for (auto& l : letters) l.power = -l.power;
            return normal_form_word(letters);
          }
        },
        a);
  }

  GroupElem pow(const GroupElem& a, long long e) const {
    GroupElem base = e < 0 ? inv(a) : a;
    GroupElem out = identity();
    for (long long i = 0; i < (e < 0 ? -e : e); ++i) out = mul(out, base);
    return out;
  }

  /// Product of a word given as indices into generators().
  GroupElem evaluate(std::span<const std::size_t> word) const {
    GroupElem out = identity();
    for (auto i : word) out = mul(out, generators_.at(i));
    return out;
  }

  GroupElem parse(std::string_view text) const {
    text = detail::strip(text);
    GroupElem g = std::visit(
        [&](const auto& f) -> GroupElem {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, PermFamily>) {
            return parse_perm(text, f.degree);
          } else if constexpr (std::is_same_v<F, MatrixFamily>) {
            return parse_matrix(text, f.dim);
          } else if constexpr (std::is_same_v<F, AffineFamily>) {
            if (text.size() < 2 || text.front() != '(' || text.back() != ')')
              throw Error(ErrorCode::MalformedInput, "affine element must look like (a,b)");
            auto parts = detail::split_top_level(text.substr(1, text.size() - 2));
            if (parts.size() != 2) throw Error(ErrorCode::MalformedInput, "affine element needs two entries");
            return Affine{parse_rat(parts[0]), parse_rat(parts[1])};
          } else {
            return normal_form_word(detail::parse_bs_letters(text));
          }
        },
        family_);
    validate(g);
    return g;
  }

  bool operator==(const GroupCtx& o) const { return family_ == o.family_; }

 private:
  void check_family(const GroupElem& a) const {
    bool ok = std::visit(
        [&a](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, PermFamily>) {
            const auto* p = std::get_if<Perm>(&a);
            return p && p->images.size() == f.degree;
          } else if constexpr (std::is_same_v<F, MatrixFamily>) {
            const auto* m = std::get_if<RatMatrix>(&a);
            return m && m->dim == f.dim;
          } else if constexpr (std::is_same_v<F, AffineFamily>) {
            return std::holds_alternative<Affine>(a);
          } else {
            return std::holds_alternative<BSWord>(a);
          }
        },
        family_);
    if (!ok) throw Error(ErrorCode::FamilyMismatch, "element " + to_string(a) + " is not in " + family_name(family_));
  }

  void check_same(const GroupElem& a, const GroupElem& b) const {
    check_family(a);
    check_family(b);
  }

  static Perm parse_perm(std::string_view text, std::size_t degree) {
    Perm p;
    p.images.resize(degree);
    std::iota(p.images.begin(), p.images.end(), 0u);
    if (text == "e" || text == "()" || text.empty()) return p;
    if (text.front() == '[') {
      if (text.back() != ']') throw Error(ErrorCode::MalformedInput, "unclosed image list");
      auto parts = detail::split_top_level(text.substr(1, text.size() - 2));
      if (parts.size() != degree) throw Error(ErrorCode::FamilyMismatch, "image list has wrong length");
      for (std::size_t i = 0; i < degree; ++i) {
        auto v = parse_bigint(parts[i]);
        if (v < 0 || v >= degree) throw Error(ErrorCode::MalformedInput, "image out of range");
        p.images[i] = static_cast<std::uint32_t>(v);
      }
      return p;
    }
    // Product of cycles, composed right to left like every other product.
    std::vector<std::vector<std::uint32_t>> cycles;
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == ' ') {
        ++i;
        continue;
      }
      if (text[i] != '(') throw Error(ErrorCode::MalformedInput, "expected '(' in cycle notation");
      auto close = text.find(')', i);
      if (close == std::string_view::npos) throw Error(ErrorCode::MalformedInput, "unclosed cycle");
      std::vector<std::uint32_t> cyc;
      std::string token;
      auto flush = [&] {
        if (token.empty()) return;
        auto v = parse_bigint(token);
        if (v < 0 || v >= degree) throw Error(ErrorCode::MalformedInput, "point " + token + " out of range");
        cyc.push_back(static_cast<std::uint32_t>(v));
        token.clear();
      };
      for (std::size_t j = i + 1; j < close; ++j) {
        if (text[j] == ' ' || text[j] == ',') flush();
        else token += text[j];
      }
      flush();
      cycles.push_back(std::move(cyc));
      i = close + 1;
    }
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
      const auto& cyc = *it;
      std::vector<bool> dup(degree, false);
      for (auto v : cyc) {
        if (dup[v]) throw Error(ErrorCode::MalformedInput, "repeated point in cycle");
        dup[v] = true;
      }
      Perm c;
      c.images.resize(degree);
      std::iota(c.images.begin(), c.images.end(), 0u);
      for (std::size_t k = 0; k < cyc.size(); ++k) c.images[cyc[k]] = cyc[(k + 1) % cyc.size()];
      Perm next;
      next.images.resize(degree);
      for (std::size_t k = 0; k < degree; ++k) next.images[k] = c.images[p.images[k]];
      p = next;
    }
    return p;
  }

  static RatMatrix parse_matrix(std::string_view text, std::size_t dim) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
      throw Error(ErrorCode::MalformedInput, "matrix must look like [[a,b],[c,d]]");
    auto rows = detail::split_top_level(text.substr(1, text.size() - 2));
    if (rows.size() != dim) throw Error(ErrorCode::FamilyMismatch, "matrix has wrong number of rows");
    RatMatrix m{dim, std::vector<Rat>(dim * dim)};
    for (std::size_t r = 0; r < dim; ++r) {
      std::string_view row = rows[r];
      if (row.size() < 2 || row.front() != '[' || row.back() != ']')
        throw Error(ErrorCode::MalformedInput, "matrix row must be bracketed");
      auto cells = detail::split_top_level(row.substr(1, row.size() - 2));
      if (cells.size() != dim) throw Error(ErrorCode::FamilyMismatch, "matrix row has wrong length");
      for (std::size_t c = 0; c < dim; ++c) m.at(r, c) = parse_rat(cells[c]);
    }
    return m;
  }

  Family family_;
  std::vector<GroupElem> primary_;
  std::vector<GroupElem> generators_;
};

inline bool same_element(const GroupElem& a, const GroupElem& b) { return a == b; }

/// Random word of length at most max_len in the symmetric generators.
template <class Rng>
GroupElem random_element(const GroupCtx& ctx, Rng& rng, std::size_t max_len) {
  GroupElem g = ctx.identity();
  auto gens = ctx.generators();
  if (gens.empty()) return g;
  std::size_t len = static_cast<std::size_t>(rng() % (max_len + 1));
  for (std::size_t i = 0; i < len; ++i) g = ctx.mul(g, gens[static_cast<std::size_t>(rng() % gens.size())]);
  return g;
}

/// All elements of a finite group, in breadth-first order from the identity.
inline std::vector<GroupElem> enumerate_group(const GroupCtx& ctx, std::size_t budget) {
  if (!ctx.is_finite_family()) throw Error(ErrorCode::NotFiniteFamily, "group enumeration needs Perm(n)");
  std::vector<GroupElem> out{ctx.identity()};
  std::unordered_set<std::string> seen{to_string(out.front())};
  std::size_t head = 0;
  while (head < out.size()) {
    GroupElem g = out[head++];
    for (const auto& s : ctx.generators()) {
      GroupElem h = ctx.mul(s, g);
      if (seen.insert(to_string(h)).second) {
        out.push_back(std::move(h));
        if (out.size() > budget) throw BudgetExceededError("group larger than budget", {out.size(), {}});
      }
    }
  }
  return out;
}

/// Elements of the subgroup generated by gens inside a finite group.
inline std::vector<GroupElem> enumerate_subgroup(const GroupCtx& ctx, std::span<const GroupElem> gens,
                                                 std::size_t budget) {
  std::vector<GroupElem> out{ctx.identity()};
  std::unordered_set<std::string> seen{to_string(out.front())};
  std::size_t head = 0;
  while (head < out.size()) {
    GroupElem g = out[head++];
    for (const auto& s : gens) {
      GroupElem h = ctx.mul(s, g);
      if (seen.insert(to_string(h)).second) {
        out.push_back(std::move(h));
        if (out.size() > budget) throw BudgetExceededError("subgroup larger than budget", {out.size(), {}});
      }
    }
  }
  return out;
}

}  // namespace hecke

#endif  // HECKE_GROUP_HPP
