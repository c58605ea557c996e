#include "apxgroups/freecert.hpp"

#include "apxgroups/element_set.hpp"

namespace apx {

namespace {

bool is_integer(const Rational& r) { return denominator(r) == 1; }

bool abs_at_least_two(const Rational& r) {
  BigInt n = numerator(r);
  if (n < 0) n = -n;
  return is_integer(r) && n >= 2;
}

}  // namespace

std::optional<FreenessCertificate> pingpong_certify(const ContextPtr& ctx,
                                                    const Element& a,
                                                    const Element& b) {
  if (ctx->family() != Family::Matrix || ctx->rank() != 2)
    throw InputError("pingpong_certify: needs a 2x2 matrix group");
  ctx->validate(a);
  ctx->validate(b);
  const MatrixPayload& ma = a.matrix();
  const MatrixPayload& mb = b.matrix();
  // a = [[1, t], [0, 1]], b = [[1, 0], [s, 1]], |t| >= 2, |s| >= 2
  if (ma.entries[0] != 1 || ma.entries[3] != 1 || ma.entries[2] != 0) return std::nullopt;
  if (mb.entries[0] != 1 || mb.entries[3] != 1 || mb.entries[1] != 0) return std::nullopt;
  const Rational& t = ma.entries[1];
  const Rational& s = mb.entries[2];
  if (!abs_at_least_two(t) || !abs_at_least_two(s)) return std::nullopt;
  FreenessCertificate cert;
  cert.mode = FreenessMode::PingPong;
  cert.a = a;
  cert.b = b;
  cert.t = t;
  cert.s = s;
  return cert;
}

NoRelationOutcome no_relation_check(const ContextPtr& ctx, const Element& a,
                                    const Element& b, int length_bound) {
  if (length_bound < 1) throw InputError("no_relation_check: L must be >= 1");
  ctx->validate(a);
  ctx->validate(b);

  // Count of reduced words of length <= L over two letters: 2*(3^L - 1).
  {
    std::size_t budget = runtime_config().element_budget;
    long double words = 2.0L * (std::pow(3.0L, static_cast<long double>(length_bound)) - 1);
    if (words > static_cast<long double>(budget))
      throw BudgetError("no_relation_check: word count at L = " +
                            std::to_string(length_bound) +
                            " exceeds the element budget",
                        budget);
  }

  const Element letters[4] = {a, ctx->inv(a), b, ctx->inv(b)};
  // Symbol values in canonical order: -2 (b^-1), -1 (a^-1), 1 (a), 2 (b).
  const int symbol_of[4] = {-2, -1, 1, 2};
  const Element* letter_of[4] = {&letters[3], &letters[1], &letters[0], &letters[2]};

  std::uint64_t checked = 0;
  std::vector<int> word;
  std::vector<Element> prefix;  // prefix[i] = value of word[0..i]

  // Iterative deepening: all words of length `len` in lexicographic symbol
  // order, so the first identity hit is the shortest, lex-least relation.
  for (int len = 1; len <= length_bound; ++len) {
    word.assign(len, 0);
    prefix.assign(len, Element());
    // DFS over positions with explicit stack encoded in `word` as indices
    // 0..3 into symbol_of; -1 marks "not yet chosen".
    std::vector<int> choice(len, -1);
    int depth = 0;
    while (depth >= 0) {
      if (++choice[depth] >= 4) {
        choice[depth] = -1;
        --depth;
        continue;
      }
      int sym = symbol_of[choice[depth]];
      if (depth > 0 && sym == -word[depth - 1]) continue;  // not reduced
      word[depth] = sym;
      const Element& letter = *letter_of[choice[depth]];
      prefix[depth] = depth == 0 ? letter : ctx->mul(prefix[depth - 1], letter);
      if (depth + 1 == len) {
        ++checked;
        if (ctx->is_identity(prefix[depth])) {
          RelationCounterexample cx;
          cx.a = a;
          cx.b = b;
          cx.word.assign(word.begin(), word.end());
          return cx;
        }
      } else {
        ++depth;
      }
    }
  }

  FreenessCertificate cert;
  cert.mode = FreenessMode::NoRelationUpTo;
  cert.a = a;
  cert.b = b;
  cert.length_bound = length_bound;
  cert.words_checked = checked;
  return cert;
}

std::optional<FreePairResult> free_pair_search(const ElementSet& a, int m,
                                               int length_bound) {
  if (m < 1) throw InputError("free_pair_search: m must be >= 1");
  const ContextPtr& ctx = a.context();
  ElementSet pool = power(a, m);

  const bool pingpong_possible =
      ctx->family() == Family::Matrix && ctx->rank() == 2;
  if (pingpong_possible) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        for (int orient = 0; orient < 2; ++orient) {
          const Element& x = orient == 0 ? pool[i] : pool[j];
          const Element& y = orient == 0 ? pool[j] : pool[i];
          if (auto cert = pingpong_certify(ctx, x, y))
            return FreePairResult{x, y, std::move(*cert)};
        }
      }
    }
  }

  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      NoRelationOutcome out = no_relation_check(ctx, pool[i], pool[j], length_bound);
      if (auto* cert = std::get_if<FreenessCertificate>(&out))
        return FreePairResult{pool[i], pool[j], std::move(*cert)};
    }
  }
  return std::nullopt;
}

}  // namespace apx
