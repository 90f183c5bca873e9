#include "tq/partitions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "tq/rings.hpp"

namespace tq {

Family family_parse(const std::string& name) {
  if (name == "gl") return Family::GL;
  if (name == "sp") return Family::Sp;
  if (name == "o") return Family::O;
  if (name == "so") return Family::SO;
  if (name == "gsp") return Family::GSp;
  if (name == "go") return Family::GO;
  throw error("BadFamily", "unknown family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::GL: return "gl";
    case Family::Sp: return "sp";
    case Family::O: return "o";
    case Family::SO: return "so";
    case Family::GSp: return "gsp";
    case Family::GO: return "go";
  }
  return "?";
}

int family_epsilon(Family f) {
  switch (f) {
    case Family::Sp:
    case Family::GSp: return -1;
    case Family::O:
    case Family::SO:
    case Family::GO: return 1;
    case Family::GL:
      throw error("FormlessFamily", "GL preserves no bilinear form");
  }
  return 0;
}

bool family_has_form(Family f) { return f != Family::GL; }

bool family_similitude(Family f) {
  return f == Family::GSp || f == Family::GO;
}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
  for (int d : parts)
    if (d <= 0) throw error("BadPartition", "parts must be positive");
  if (!std::is_sorted(parts.rbegin(), parts.rend()))
    throw error("BadPartition", "parts must be weakly decreasing");
}

Partition Partition::parse(const std::string& text) {
  std::vector<int> parts;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find('+', pos);
    if (next == std::string::npos) next = text.size();
    const std::string tok = text.substr(pos, next - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw error("BadPartition", "cannot parse partition '" + text + "'");
    parts.push_back(std::stoi(tok));
    pos = next + 1;
  }
  if (parts.empty())
    throw error("BadPartition", "empty partition text");
  std::sort(parts.rbegin(), parts.rend());
  return Partition(std::move(parts));
}

int Partition::total() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

int Partition::multiplicity(int d) const {
  return static_cast<int>(std::count(parts.begin(), parts.end(), d));
}

std::string Partition::to_string() const {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "+";
    out += std::to_string(parts[i]);
  }
  return out;
}

namespace partitions {

bool is_admissible(const Partition& sigma, Family f) {
  if (f == Family::GL) return true;
  const int bad_parity = family_epsilon(f) == 1 ? 0 : 1;
  for (size_t i = 0; i < sigma.parts.size();) {
    size_t j = i;
    while (j < sigma.parts.size() && sigma.parts[j] == sigma.parts[i]) ++j;
    if (sigma.parts[i] % 2 == bad_parity && (j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

std::vector<Partition> enumerate_admissible(int m, Family f) {
  if (m <= 0) throw error("BadPartition", "m must be positive");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Descending-first recursion emits partitions in reverse-lex order.
  std::function<void(int, int)> rec = [&](int rem, int max_part) {
    if (rem == 0) {
      Partition sigma(cur);
      if (is_admissible(sigma, f)) out.push_back(std::move(sigma));
      return;
    }
    for (int d = std::min(rem, max_part); d >= 1; --d) {
      cur.push_back(d);
      rec(rem - d, d);
      cur.pop_back();
    }
  };
  rec(m, m);
  return out;
}

int weight_dim(const Partition& sigma, int s) {
  const int abs_s = s < 0 ? -s : s;
  int count = 0;
  for (int d : sigma.parts)
    if (d - 1 >= abs_s && (d - 1 - abs_s) % 2 == 0) ++count;
  return count;
}

int lowest_weight_dim(const Partition& sigma, int s) {
  return sigma.multiplicity(1 - s);
}

ComponentOrder component_order(const Partition& sigma, Family f) {
  if (f == Family::GL) return {0, 1};
  if (!is_admissible(sigma, f))
    throw error("InadmissiblePartition",
                sigma.to_string() + " is not admissible for " + family_name(f));
  const int eps = family_epsilon(f);
  int t = 0;
  const int d_max = sigma.parts.empty() ? 1 : sigma.parts[0];
  for (int s = 1 - d_max; s <= 0; ++s) {
    if (lowest_weight_dim(sigma, s) == 0) continue;
    const int sign = s % 2 == 0 ? 1 : -1;  // (-1)^s
    if (sign == eps) ++t;
  }
  ComponentOrder co;
  co.t = t;
  if (f == Family::SO) {
    co.order = t == 0 ? 1 : (1LL << (t - 1));
  } else {
    co.order = 1LL << t;
  }
  return co;
}

bool dominance_leq(const Partition& sigma, const Partition& tau) {
  if (sigma.total() != tau.total())
    throw error("UnequalTotals", "dominance compares partitions of equal total");
  const size_t k = std::max(sigma.parts.size(), tau.parts.size());
  int ps = 0, pt = 0;
  for (size_t i = 0; i < k; ++i) {
    ps += i < sigma.parts.size() ? sigma.parts[i] : 0;
    pt += i < tau.parts.size() ? tau.parts[i] : 0;
    if (ps > pt) return false;
  }
  return true;
}

FormulaDiagnostics formula_diagnostics(const Partition& sigma) {
  FormulaDiagnostics diag;
  const int d_max = sigma.parts.empty() ? 1 : sigma.parts[0];
  auto closed_m = [&](int s) {
    const int abs_s = s < 0 ? -s : s;
    int count = 0;
    for (int d : sigma.parts)
      if (d - 1 >= abs_s) ++count;
    return count;
  };
  for (int s = -d_max; s <= d_max; ++s)
    if (closed_m(s) != weight_dim(sigma, s)) diag.weight_mismatch.push_back(s);
  for (int s = 1 - d_max; s <= 0; ++s)
    if (closed_m(s + 1) - closed_m(s) != lowest_weight_dim(sigma, s))
      diag.lowest_mismatch.push_back(s);
  return diag;
}

}  // namespace partitions
}  // namespace tq
