#include "apxgroups/subgroup.hpp"

#include <sstream>

namespace apx {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

Int parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    Int v = std::stoll(s, &used);
    if (used != s.size()) throw InputError("bad integer: " + s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad integer: " + s);
  }
}

}  // namespace

SubgroupOracle SubgroupOracle::whole_group(const ContextPtr& ctx) {
  return SubgroupOracle(ctx, Kind::All, "all");
}

SubgroupOracle SubgroupOracle::parse(const ContextPtr& ctx, const std::string& spec) {
  auto head = spec;
  std::string args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  Family fam = ctx->family();

  if (head == "all") return SubgroupOracle(ctx, Kind::All, spec);

  if (head == "even-length") {
    if (fam != Family::Free)
      throw InputError("even-length oracle needs a free group");
    return SubgroupOracle(ctx, Kind::EvenLength, spec);
  }
  if (head == "even-lattice") {
    if (fam != Family::Abelian)
      throw InputError("even-lattice oracle needs a free abelian group");
    SubgroupOracle o(ctx, Kind::EvenLattice, spec);
    o.modulus_ = parse_int(args);
    if (o.modulus_ < 1) throw InputError("even-lattice modulus must be >= 1");
    return o;
  }
  if (head == "sublattice") {
    if (fam != Family::Abelian)
      throw InputError("sublattice oracle needs a free abelian group");
    SubgroupOracle o(ctx, Kind::Sublattice, spec);
    for (const std::string& p : split(args, ',')) o.moduli_.push_back(parse_int(p));
    if (static_cast<int>(o.moduli_.size()) != ctx->rank())
      throw InputError("sublattice moduli count must equal the rank");
    for (Int m : o.moduli_)
      if (m < 1) throw InputError("sublattice moduli must be >= 1");
    return o;
  }
  if (head == "upper-triangular") {
    if (fam != Family::Matrix)
      throw InputError("upper-triangular oracle needs a matrix group");
    return SubgroupOracle(ctx, Kind::UpperTriangular, spec);
  }
  if (head == "det-one") {
    if (fam != Family::Matrix) throw InputError("det-one oracle needs a matrix group");
    return SubgroupOracle(ctx, Kind::DetOne, spec);
  }
  if (head == "center") {
    if (fam != Family::Heisenberg)
      throw InputError("center oracle needs the Heisenberg group");
    return SubgroupOracle(ctx, Kind::Center, spec);
  }
  if (head == "congruence") {
    if (fam != Family::Heisenberg)
      throw InputError("congruence oracle needs the Heisenberg group");
    SubgroupOracle o(ctx, Kind::Congruence, spec);
    o.modulus_ = parse_int(args);
    if (o.modulus_ < 1) throw InputError("congruence modulus must be >= 1");
    return o;
  }
  if (head == "table-subgroup") {
    if (fam != Family::Table) throw InputError("table-subgroup oracle needs a table group");
    SubgroupOracle o(ctx, Kind::TableSubgroup, spec);
    o.member_.assign(ctx->table_order(), 0);
    for (const std::string& p : split(args, ',')) {
      Int i = parse_int(p);
      if (i < 0 || i >= ctx->table_order())
        throw InputError("table-subgroup index out of range: " + p);
      o.member_[static_cast<std::size_t>(i)] = 1;
    }
    // validate subgroup: nonempty, closed under products and inverses
    const auto& tbl = ctx->table();
    std::vector<int> members;
    for (int i = 0; i < ctx->table_order(); ++i)
      if (o.member_[i]) members.push_back(i);
    if (members.empty()) throw InputError("table-subgroup must be nonempty");
    for (int a : members)
      for (int b : members)
        if (!o.member_[tbl[a][b]])
          throw InputError("table-subgroup is not closed under multiplication");
    bool has_id = false;
    for (int a : members)
      if (ctx->is_identity(ctx->table_element(a))) has_id = true;
    if (!has_id) throw InputError("table-subgroup does not contain the identity");
    for (int a : members) {
      Element inv = ctx->inv(ctx->table_element(a));
      if (!o.member_[inv.ints()[0]])
        throw InputError("table-subgroup is not closed under inverses");
    }
    return o;
  }
  throw InputError("unknown subgroup oracle: " + spec);
}

bool SubgroupOracle::contains(const Element& e) const {
  ctx_->validate(e);
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::EvenLength: {
      Int len = 0;
      for (Run r : e.int_span()) len += run_count(r);
      return len % 2 == 0;
    }
    case Kind::EvenLattice: {
      for (Int v : e.int_span())
        if (v % modulus_ != 0) return false;
      return true;
    }
    case Kind::Sublattice: {
      auto s = e.int_span();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] % moduli_[i] != 0) return false;
      return true;
    }
    case Kind::UpperTriangular: {
      const MatrixPayload& m = e.matrix();
      for (std::uint32_t i = 0; i < m.n; ++i)
        for (std::uint32_t j = 0; j < i; ++j)
          if (m.entries[i * m.n + j] != 0) return false;
      return true;
    }
    case Kind::DetOne: {
      const MatrixPayload& m = e.matrix();
      // determinant by fraction-free expansion is overkill at n <= 16;
      // Gaussian elimination over the rationals is exact anyway.
      std::vector<Rational> a = m.entries;
      Rational det = 1;
      const std::uint32_t n = m.n;
      for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t pivot = col;
        while (pivot < n && a[pivot * n + col] == 0) ++pivot;
        if (pivot == n) return false;  // singular, certainly not det 1
        if (pivot != col) {
          for (std::uint32_t j = 0; j < n; ++j)
            std::swap(a[pivot * n + j], a[col * n + j]);
          det = -det;
        }
        det *= a[col * n + col];
        Rational d = a[col * n + col];
        for (std::uint32_t row = col + 1; row < n; ++row) {
          Rational f = a[row * n + col] / d;
          if (f == 0) continue;
          for (std::uint32_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
        }
      }
      return det == 1;
    }
    case Kind::Center: {
      auto s = e.int_span();
      return s[0] == 0 && s[1] == 0;
    }
    case Kind::Congruence: {
      for (Int v : e.int_span())
        if (v % modulus_ != 0) return false;
      return true;
    }
    case Kind::TableSubgroup:
      return member_[e.ints()[0]] != 0;
  }
  return false;
}

ElementSet intersect_coset(const ElementSet& s, const SubgroupOracle& h,
                           const Element& x) {
  if (!s.context()->same_group(*h.context()))
    throw InputError("oracle context does not match the set");
  const GroupContext& g = *s.context();
  Element xinv = g.inv(x);
  std::vector<char> keep(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (h.contains(g.mul(s[i], xinv))) keep[i] = 1;
  return filter_sorted(s, keep);
}

}  // namespace apx
