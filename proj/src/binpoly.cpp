#include "mckay/binpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "mckay/errors.hpp"

namespace mckay::binpoly {

GroupSpec GroupSpec::cyclic(unsigned n) {
  if (n < 2) throw ConfigError("cyclic family needs n >= 2");
  return {Family::CyclicA, n};
}

GroupSpec GroupSpec::binary_dihedral(unsigned n) {
  if (n < 2) throw ConfigError("binary dihedral family needs n >= 2");
  return {Family::BinaryDihedralD, n};
}

GroupSpec GroupSpec::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::toupper(c)));
  if (t == "E6") return e6();
  if (t == "E7") return e7();
  if (t == "E8") return e8();
  if (t.size() >= 2 && (t[0] == 'A' || t[0] == 'D') &&
      std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const unsigned long n = std::stoul(t.substr(1));
    if (n > 64) throw ConfigError("family parameter too large: " + text);
    return t[0] == 'A' ? cyclic(static_cast<unsigned>(n)) : binary_dihedral(static_cast<unsigned>(n));
  }
  throw ConfigError("unknown family '" + text + "' (expected A n, D n, E6, E7 or E8)");
}

std::uint32_t GroupSpec::expected_order() const {
  switch (family) {
    case Family::CyclicA: return n;
    case Family::BinaryDihedralD: return 4 * n;
    case Family::BinaryTetrahedralE6: return 24;
    case Family::BinaryOctahedralE7: return 48;
    case Family::BinaryIcosahedralE8: return 120;
  }
  return 0;
}

std::uint32_t GroupSpec::exponent() const {
  switch (family) {
    case Family::CyclicA: return n;
    case Family::BinaryDihedralD: return std::lcm(2 * n, 4u);
    case Family::BinaryTetrahedralE6: return 12;
    case Family::BinaryOctahedralE7: return 24;
    case Family::BinaryIcosahedralE8: return 60;
  }
  return 0;
}

std::string GroupSpec::label() const {
  switch (family) {
    case Family::CyclicA: return "A" + std::to_string(n);
    case Family::BinaryDihedralD: return "D" + std::to_string(n);
    case Family::BinaryTetrahedralE6: return "E6";
    case Family::BinaryOctahedralE7: return "E7";
    case Family::BinaryIcosahedralE8: return "E8";
  }
  return "?";
}

GroupElement mul(const GroupElement& a, const GroupElement& b, const PrimeField& f) {
  const auto& x = a.m;
  const auto& y = b.m;
  return {{f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])), f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
           f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])), f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3]))}};
}

bool is_admissible_modulus(const GroupSpec& spec, std::uint32_t p) {
  if (!ffla::is_prime(p) || p > PrimeField::kMaxModulus) return false;
  if ((p - 1) % spec.exponent() != 0) return false;
  if (spec.expected_order() % p == 0) return false;
  if (spec.family != Family::CyclicA && p % 4 != 1) return false;
  if (spec.family == Family::BinaryOctahedralE7 && p % 8 != 1) return false;
  if (spec.family == Family::BinaryIcosahedralE8 && p % 5 != 1) return false;
  return true;
}

PrimeField choose_modulus(const GroupSpec& spec, std::uint32_t after) {
  for (std::uint32_t p = std::max<std::uint32_t>(after + 1, 2); p <= PrimeField::kMaxModulus; ++p)
    if (is_admissible_modulus(spec, p)) return PrimeField(p);
  throw CheckFailure("choose_modulus", "no admissible prime below 2^16 for " + spec.label());
}

namespace {

// a + b i + c j + d k  ->  [[a + b s, c + d s], [-c + d s, a - b s]] with s^2 = -1.
GroupElement quaternion(const std::array<Residue, 4>& q, Residue s, const PrimeField& f) {
  const auto [a, b, c, d] = q;
  return {{f.add(a, f.mul(b, s)), f.add(c, f.mul(d, s)), f.add(f.neg(c), f.mul(d, s)), f.sub(a, f.mul(b, s))}};
}

Residue required_sqrt(const PrimeField& f, std::int64_t value, const std::string& label) {
  auto r = f.sqrt(f.reduce(value));
  if (!r) throw CheckFailure("build_group", label + ": " + std::to_string(value) + " has no square root mod " +
                                                std::to_string(f.modulus()));
  return *r;
}

std::vector<GroupElement> hurwitz_units(const PrimeField& f, Residue s) {
  std::vector<GroupElement> out;
  const Residue one = 1, minus_one = f.neg(1);
  for (int axis = 0; axis < 4; ++axis) {
    for (Residue sign : {one, minus_one}) {
      std::array<Residue, 4> q{0, 0, 0, 0};
      q[axis] = sign;
      out.push_back(quaternion(q, s, f));
    }
  }
  const Residue half = f.inv(2);
  for (int mask = 0; mask < 16; ++mask) {
    std::array<Residue, 4> q{};
    for (int k = 0; k < 4; ++k) q[k] = (mask >> k) & 1 ? f.neg(half) : half;
    out.push_back(quaternion(q, s, f));
  }
  return out;
}

std::vector<GroupElement> element_list(const GroupSpec& spec, const PrimeField& f) {
  std::vector<GroupElement> out;
  switch (spec.family) {
    case Family::CyclicA: {
      const Residue w = f.root_of_order(spec.n);
      const Residue wi = f.inv(w);
      for (unsigned k = 0; k < spec.n; ++k) out.push_back({{f.pow(w, k), 0, 0, f.pow(wi, k)}});
      break;
    }
    case Family::BinaryDihedralD: {
      const Residue w = f.root_of_order(2 * spec.n);
      const Residue wi = f.inv(w);
      const GroupElement j{{0, 1, f.neg(1), 0}};
      for (unsigned k = 0; k < 2 * spec.n; ++k) {
        GroupElement rot{{f.pow(w, k), 0, 0, f.pow(wi, k)}};
        out.push_back(rot);
        out.push_back(mul(rot, j, f));
      }
      break;
    }
    case Family::BinaryTetrahedralE6:
    case Family::BinaryOctahedralE7:
    case Family::BinaryIcosahedralE8: {
      const Residue s = required_sqrt(f, -1, spec.label());
      out = hurwitz_units(f, s);
      if (spec.family == Family::BinaryOctahedralE7) {
        const Residue r = f.inv(required_sqrt(f, 2, spec.label()));  // 1/sqrt(2)
        for (int i = 0; i < 4; ++i)
          for (int k = i + 1; k < 4; ++k)
            for (int mask = 0; mask < 4; ++mask) {
              std::array<Residue, 4> q{0, 0, 0, 0};
              q[i] = mask & 1 ? f.neg(r) : r;
              q[k] = mask & 2 ? f.neg(r) : r;
              out.push_back(quaternion(q, s, f));
            }
      }
      if (spec.family == Family::BinaryIcosahedralE8) {
        const Residue root5 = required_sqrt(f, 5, spec.label());
        const Residue half = f.inv(2);
        const Residue phi = f.mul(f.add(1, root5), half);
        const std::array<Residue, 4> base{0, 1, f.inv(phi), phi};
        std::array<int, 4> perm{0, 1, 2, 3};
        do {
          int inversions = 0;
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b];
          if (inversions % 2 != 0) continue;
          for (int mask = 0; mask < 16; ++mask) {
            std::array<Residue, 4> q{};
            for (int k = 0; k < 4; ++k) {
              const Residue v = f.mul(base[perm[k]], half);
              q[k] = (mask >> k) & 1 ? f.neg(v) : v;
            }
            out.push_back(quaternion(q, s, f));
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      break;
    }
  }
  // Sign patterns on zero coordinates repeat elements; deduplicate.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

FiniteMatrixGroup::FiniteMatrixGroup(const GroupSpec& spec, const PrimeField& field) : spec_(spec), field_(field) {
  if (!is_admissible_modulus(spec, field.modulus()))
    throw CheckFailure("build_group", "modulus " + std::to_string(field.modulus()) + " is not admissible for " +
                                          spec.label());
  auto list = element_list(spec, field_);
  const GroupElement one{{1, 0, 0, 1}};
  auto it = std::find(list.begin(), list.end(), one);
  if (it == list.end()) throw CheckFailure("build_group", spec.label() + ": identity missing from element list");
  std::rotate(list.begin(), it, it + 1);
  elements_ = std::move(list);
  identity_ = 0;

  for (const auto& g : elements_)
    if (g.det(field_) != 1) throw CheckFailure("build_group", spec.label() + ": element of determinant != 1");

  const std::size_t n = elements_.size();
  std::map<GroupElement, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(elements_[i], i);

  table_.assign(n * n, 0);
  std::vector<GroupElement> additions;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto prod = mul(elements_[i], elements_[j], field_);
      auto found = index.find(prod);
      if (found == index.end()) {
        if (std::find(additions.begin(), additions.end(), prod) == additions.end()) additions.push_back(prod);
        continue;
      }
      table_[i * n + j] = found->second;
    }
  }
  closure_additions_ = additions.size();
  if (closure_additions_ != 0)
    throw CheckFailure("build_group", spec.label() + ": element set not closed (" +
                                          std::to_string(closure_additions_) + " new products) mod " +
                                          std::to_string(field_.modulus()));
  if (n != spec.expected_order())
    throw CheckFailure("build_group", spec.label() + ": order " + std::to_string(n) + " != expected " +
                                          std::to_string(spec.expected_order()));

  inverse_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (table_[i * n + j] == identity_) inverse_[i] = j;
  for (auto v : inverse_)
    if (v == n) throw CheckFailure("build_group", spec.label() + ": element without inverse");
}

std::size_t FiniteMatrixGroup::index_of(const GroupElement& g) const {
  auto it = std::find(elements_.begin(), elements_.end(), g);
  if (it == elements_.end()) throw std::out_of_range("index_of: not a group element");
  return static_cast<std::size_t>(it - elements_.begin());
}

std::uint32_t FiniteMatrixGroup::element_order(std::size_t i) const {
  std::uint32_t k = 1;
  std::size_t x = i;
  while (x != identity_) {
    x = product(x, i);
    ++k;
  }
  return k;
}

ConjugacyClasses conjugacy_classes(const FiniteMatrixGroup& g) {
  const std::size_t n = g.order();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  ConjugacyClasses cc;
  cc.class_of.assign(n, kUnset);
  for (std::size_t x = 0; x < n; ++x) {
    if (cc.class_of[x] != kUnset) continue;
    const std::size_t id = cc.sizes.size();
    std::size_t size = 0;
    for (std::size_t h = 0; h < n; ++h) {
      const std::size_t conj = g.product(g.product(h, x), g.inverse(h));
      if (cc.class_of[conj] == kUnset) {
        cc.class_of[conj] = id;
        ++size;
      }
    }
    cc.sizes.push_back(size);
    cc.representatives.push_back(x);
  }
  cc.identity_class = cc.class_of[g.identity()];
  cc.inverse_class.resize(cc.sizes.size());
  for (std::size_t j = 0; j < cc.sizes.size(); ++j) cc.inverse_class[j] = cc.class_of[g.inverse(cc.representatives[j])];
  return cc;
}

}  // namespace mckay::binpoly
