#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace oracle {

Word reduce(const Word& w) {
  Word out;
  for (int s : w) {
    if (!out.empty() && out.back() == -s)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

Word mul(const Word& a, const Word& b) {
  Word c = a;
  c.insert(c.end(), b.begin(), b.end());
  return reduce(c);
}

Word inv(const Word& a) {
  Word out;
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(-*it);
  return out;
}

long long ball_size_closed_form(int rank, int radius) {
  // 1 + 2r * ((2r-1)^R - 1) / (2r - 2) for rank r >= 2; 2R + 1 for rank 1.
  if (radius == 0) return 1;
  if (rank == 1) return 2LL * radius + 1;
  long long q = 2LL * rank - 1;
  long long pow = 1;
  for (int i = 0; i < radius; ++i) pow *= q;
  return 1 + 2LL * rank * (pow - 1) / (q - 1);
}

std::set<Word> ball_enumeration(int rank, int radius) {
  std::set<Word> ball{{}};
  std::vector<Word> frontier{{}};
  for (int step = 0; step < radius; ++step) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int g = 1; g <= rank; ++g) {
        for (int s : {g, -g}) {
          Word c = mul(w, {s});
          if (ball.insert(c).second) next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  return ball;
}

std::set<long long> sumset(const std::set<long long>& a,
                           const std::set<long long>& b) {
  std::set<long long> out;
  for (long long x : a)
    for (long long y : b) out.insert(x + y);
  return out;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 mat_inv_unimodular(const Mat2& x) {
  long long det = x.a * x.d - x.b * x.c;
  if (det != 1 && det != -1) throw std::invalid_argument("det must be +-1");
  return Mat2{det * x.d, -det * x.b, -det * x.c, det * x.a};
}

bool mat_is_identity(const Mat2& x) {
  return x.a == 1 && x.b == 0 && x.c == 0 && x.d == 1;
}

std::optional<std::vector<int>> shortest_relation(const Mat2& x, const Mat2& y,
                                                  int max_len) {
  const Mat2 letters[4] = {mat_inv_unimodular(y), mat_inv_unimodular(x), x, y};
  const int symbols[4] = {-2, -1, 1, 2};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<int> choice(len, -1);
    std::vector<int> word(len, 0);
    std::vector<Mat2> prefix(len);
    int depth = 0;
    while (depth >= 0) {
      if (++choice[depth] >= 4) {
        choice[depth] = -1;
        --depth;
        continue;
      }
      int s = symbols[choice[depth]];
      if (depth > 0 && s == -word[depth - 1]) continue;
      word[depth] = s;
      prefix[depth] = depth == 0 ? letters[choice[depth]]
                                 : mat_mul(prefix[depth - 1], letters[choice[depth]]);
      if (depth + 1 == len) {
        if (mat_is_identity(prefix[depth])) return word;
      } else {
        ++depth;
      }
    }
  }
  return std::nullopt;
}

// -- tables -------------------------------------------------------------------

Table cyclic_table(int n) {
  Table t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

Table dihedral_table(int n) {
  // index = i + e * n for r^i s^e; s r s = r^-1
  int order = 2 * n;
  Table t(order, std::vector<int>(order));
  for (int e = 0; e < 2; ++e)
    for (int i = 0; i < n; ++i)
      for (int f = 0; f < 2; ++f)
        for (int j = 0; j < n; ++j) {
          int rot = e == 0 ? (i + j) % n : ((i - j) % n + n) % n;
          int flip = e ^ f;
          t[i + e * n][j + f * n] = rot + flip * n;
        }
  return t;
}

Table direct_product_table(const Table& a, const Table& b) {
  int na = static_cast<int>(a.size());
  int nb = static_cast<int>(b.size());
  Table t(na * nb, std::vector<int>(na * nb));
  for (int i1 = 0; i1 < na; ++i1)
    for (int i2 = 0; i2 < nb; ++i2)
      for (int j1 = 0; j1 < na; ++j1)
        for (int j2 = 0; j2 < nb; ++j2)
          t[i1 * nb + i2][j1 * nb + j2] = a[i1][j1] * nb + b[i2][j2];
  return t;
}

Table quaternion_table() {
  // elements 0..7 = +1, -1, +i, -i, +j, -j, +k, -k
  // unit products: u * v -> (sign, unit) with units 0=1, 1=i, 2=j, 3=k
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  // sgn[u][v] for u*v: i*i=-1, i*j=k, i*k=-j, j*i=-k, j*j=-1, j*k=i,
  // k*i=j, k*j=-i, k*k=-1
  static const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  Table t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int ux = x / 2, sx = x % 2 ? -1 : 1;
      int uy = y / 2, sy = y % 2 ? -1 : 1;
      int uz = unit[ux][uy];
      int sz = sx * sy * sgn[ux][uy];
      t[x][y] = uz * 2 + (sz < 0 ? 1 : 0);
    }
  return t;
}

namespace {

std::vector<std::array<int, 4>> even_permutations_4() {
  std::array<int, 4> p{0, 1, 2, 3};
  std::vector<std::array<int, 4>> out;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inversions;
    if (inversions % 2 == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Table alternating4_table() {
  auto perms = even_permutations_4();
  std::map<std::array<int, 4>, int> index;
  for (int i = 0; i < static_cast<int>(perms.size()); ++i) index[perms[i]] = i;
  Table t(12, std::vector<int>(12));
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      std::array<int, 4> comp;
      for (int x = 0; x < 4; ++x) comp[x] = perms[i][perms[j][x]];
      t[i][j] = index[comp];
    }
  return t;
}

Table dicyclic3_table() {
  // order 12: elements a^i b^j, i mod 6, j mod 2, with b^2 = a^3 and
  // b a b^-1 = a^-1; index = i + 6j.
  Table t(12, std::vector<int>(12));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 2; ++l) {
          int idx;
          if (j == 0) {
            idx = (i + k) % 6 + 6 * l;
          } else if (l == 0) {
            idx = ((i - k) % 6 + 6) % 6 + 6;
          } else {
            idx = ((i - k + 3) % 6 + 6) % 6;
          }
          t[i + 6 * j][k + 6 * l] = idx;
        }
  return t;
}

std::vector<NamedTable> all_groups_up_to_order_12() {
  std::vector<NamedTable> out;
  for (int n = 1; n <= 12; ++n)
    out.push_back({"C" + std::to_string(n), cyclic_table(n)});
  out.push_back({"C2xC2", direct_product_table(cyclic_table(2), cyclic_table(2))});
  out.push_back({"S3", dihedral_table(3)});
  out.push_back({"C4xC2", direct_product_table(cyclic_table(4), cyclic_table(2))});
  out.push_back({"C2xC2xC2",
                 direct_product_table(
                     direct_product_table(cyclic_table(2), cyclic_table(2)),
                     cyclic_table(2))});
  out.push_back({"D4", dihedral_table(4)});
  out.push_back({"Q8", quaternion_table()});
  out.push_back({"C3xC3", direct_product_table(cyclic_table(3), cyclic_table(3))});
  out.push_back({"D5", dihedral_table(5)});
  out.push_back({"C6xC2", direct_product_table(cyclic_table(6), cyclic_table(2))});
  out.push_back({"D6", dihedral_table(6)});
  out.push_back({"A4", alternating4_table()});
  out.push_back({"Dic3", dicyclic3_table()});
  return out;
}

}  // namespace oracle
