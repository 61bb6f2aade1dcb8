#include "mfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mfs/error.hpp"
#include "mfs/parallel.hpp"

namespace mfs {

namespace {

bool canonical_primitive(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    // compare w with its rotation by r
    for (std::size_t i = 0; i < n; ++i) {
      const Symbol a = w[i];
      const Symbol b = w[(i + r) % n];
      if (b < a) return false;  // a smaller rotation exists
      if (b > a) break;
      if (i + 1 == n) return false;  // equal rotation: not primitive
    }
  }
  return true;
}

// Calls visit(word) for every cyclically admissible word of length n whose
// first symbol is first.
template <typename Visit>
void cyclic_words(const Sft& sft, int n, Symbol first, Visit&& visit) {
  Word w(static_cast<std::size_t>(n));
  w[0] = first;
  const int q = sft.alphabet_size();
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      if (sft.allowed(w[static_cast<std::size_t>(n - 1)], w[0])) visit(w);
      return;
    }
    for (Symbol s = 0; s < q; ++s) {
      if (!sft.allowed(w[static_cast<std::size_t>(pos - 1)], s)) continue;
      w[static_cast<std::size_t>(pos)] = s;
      self(self, pos + 1);
    }
  };
  rec(rec, 1);
}

void check_period(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "periods start at 1");
  if (n > kMaxCatalogPeriod) {
    throw Error(ErrorKind::kPeriodTooLarge,
                "period " + std::to_string(n) + " exceeds " + std::to_string(kMaxCatalogPeriod));
  }
}

}  // namespace

std::vector<PeriodicOrbit> OrbitCatalog::all() const {
  std::vector<PeriodicOrbit> out;
  for (const auto& group : by_period) out.insert(out.end(), group.begin(), group.end());
  return out;
}

OrbitCatalog enumerate_orbits(const Sft& sft, int max_period) {
  check_period(max_period);
  OrbitCatalog catalog;
  catalog.max_period = max_period;
  catalog.by_period.resize(static_cast<std::size_t>(max_period));
  const auto q = static_cast<std::size_t>(sft.alphabet_size());
  for (int p = 1; p <= max_period; ++p) {
    std::vector<std::vector<Word>> per_symbol(q);
    parallel_for(q, [&](std::size_t s) {
      cyclic_words(sft, p, static_cast<Symbol>(s), [&](const Word& w) {
        if (canonical_primitive(w)) per_symbol[s].push_back(w);
      });
    });
    auto& group = catalog.by_period[static_cast<std::size_t>(p - 1)];
    for (auto& words : per_symbol)
      for (auto& w : words) group.emplace_back(std::move(w));
  }
  return catalog;
}

std::vector<std::uint64_t> periodic_point_counts(const Sft& sft, int max_period) {
  const auto q = static_cast<std::size_t>(sft.alphabet_size());
  using Matrix = std::vector<std::uint64_t>;
  const auto multiply = [&](const Matrix& a, const Matrix& b) {
    Matrix c(q * q, 0);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t k = 0; k < q; ++k) {
        if (a[i * q + k] == 0) continue;
        for (std::size_t j = 0; j < q; ++j) {
          std::uint64_t term = 0;
          if (__builtin_mul_overflow(a[i * q + k], b[k * q + j], &term) ||
              __builtin_add_overflow(c[i * q + j], term, &c[i * q + j])) {
            throw Error(ErrorKind::kTooLarge, "periodic point count overflows 64 bits");
          }
        }
      }
    return c;
  };
  Matrix a(q * q, 0);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      a[i * q + j] = sft.allowed(static_cast<Symbol>(i), static_cast<Symbol>(j)) ? 1 : 0;
  std::vector<std::uint64_t> traces;
  Matrix power = a;
  for (int n = 1; n <= max_period; ++n) {
    if (n > 1) power = multiply(power, a);
    std::uint64_t trace = 0;
    for (std::size_t i = 0; i < q; ++i) trace += power[i * q + i];
    traces.push_back(trace);
  }
  return traces;
}

std::vector<std::uint64_t> catalog_point_counts(const OrbitCatalog& catalog) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(catalog.max_period), 0);
  for (int n = 1; n <= catalog.max_period; ++n)
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) counts[static_cast<std::size_t>(n - 1)] += static_cast<std::uint64_t>(d) * catalog.period(d).size();
  return counts;
}

double periodic_pressure(const Sft& sft, const Potential& phi, double t, int n) {
  check_period(n);
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential is defined on a different SFT");
  const auto k = static_cast<std::size_t>(phi.depth());
  std::vector<double> exponents;
  Word window(k);
  for (Symbol first = 0; first < sft.alphabet_size(); ++first) {
    cyclic_words(sft, n, first, [&](const Word& w) {
      double sum = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) window[j] = w[(i + j) % w.size()];
        sum += phi(window);
      }
      exponents.push_back(t * sum);
    });
  }
  if (exponents.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(exponents.begin(), exponents.end());
  double total = 0.0;
  for (double e : exponents) total += std::exp(e - top);
  return (std::log(total) + top) / static_cast<double>(n);
}

SpectrumGraph word_count_spectrum(const Sft& sft, const Potential& phi, int n, int bins) {
  if (!(sft == phi.sft())) throw Error(ErrorKind::kSftMismatch, "potential is defined on a different SFT");
  if (n < phi.depth() || bins < 1) throw Error(ErrorKind::kInvalidArgument, "need n >= depth and bins >= 1");
  if (static_cast<double>(n) * std::log2(static_cast<double>(sft.alphabet_size())) > 24.0) {
    throw Error(ErrorKind::kTooLarge, "word enumeration beyond 2^24 words");
  }
  const double lo = phi.min();
  const double hi = phi.max();
  const auto k = static_cast<std::size_t>(phi.depth());
  std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
  std::vector<long double> alpha_sum(static_cast<std::size_t>(bins), 0.0L);
  const auto add = [&](double sum) {
    const double avg = sum / n;
    std::size_t bin = 0;
    if (hi > lo) {
      const double u = (avg - lo) / (hi - lo) * bins + 1e-9;
      bin = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(bins - 1)));
    }
    count[bin] += 1.0;
    alpha_sum[bin] += avg;
  };
  Word w(static_cast<std::size_t>(n));
  Word window(k);
  const auto close = [&](double sum) {
    if (!sft.allowed(w.back(), w.front())) return;
    for (std::size_t start = w.size() + 1 - k; start < w.size(); ++start) {
      for (std::size_t j = 0; j < k; ++j) window[j] = w[(start + j) % w.size()];
      sum += phi(window);
    }
    add(sum);
  };
  const auto rec = [&](auto&& self, std::size_t pos, double sum) -> void {
    if (pos == w.size()) {
      close(sum);
      return;
    }
    for (Symbol s = 0; s < sft.alphabet_size(); ++s) {
      if (pos > 0 && !sft.allowed(w[pos - 1], s)) continue;
      w[pos] = s;
      const double next = pos + 1 >= k ? sum + phi(std::span<const Symbol>(w).subspan(pos + 1 - k, k)) : sum;
      self(self, pos + 1, next);
    }
  };
  rec(rec, 0, 0.0);
  std::vector<SpectrumPoint> points;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0.0) continue;
    points.push_back({static_cast<double>(alpha_sum[b] / count[b]), std::log(count[b]) / n});
  }
  return SpectrumGraph(std::move(points));
}

}  // namespace mfs
