#include "conecode/semimeasure.hpp"

#include <string>

namespace conecode {

SemimeasureTable::SemimeasureTable(int depth) : depth_(depth) {
  if (depth < 0 || depth > kMaxTableDepth)
    fail(Errc::depth_exceeded, "table depth out of range: " + std::to_string(depth));
  values_.assign((size_t(1) << (depth + 1)) - 1, Dyadic());
}

const Dyadic& SemimeasureTable::at(const BitString& x) const {
  if (x.length() > depth_)
    fail(Errc::depth_exceeded, "string longer than table depth: " + x.str());
  return values_[node_index(x)];
}

void SemimeasureTable::set(const BitString& x, const Dyadic& v) {
  if (x.length() > depth_)
    fail(Errc::depth_exceeded, "string longer than table depth: " + x.str());
  values_[node_index(x)] = v;
}

bool SemimeasureTable::normalized() const {
  return !values_.empty() && values_[0] == Dyadic::one();
}

std::vector<Violation> validate(const SemimeasureTable& tab) {
  std::vector<Violation> out;
  if (tab.node_count() == 0) {
    out.push_back({BitString(), "empty table"});
    return out;
  }
  if (tab.at_index(0) > Dyadic::one())
    out.push_back({BitString(), "value(-) = " + tab.at_index(0).str() + " > 1"});
  for (int n = 0; n < tab.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      const Dyadic& px = tab.at_index(SemimeasureTable::node_index(x));
      Dyadic children = tab.at(x.appended(0)) + tab.at(x.appended(1));
      if (px < children) {
        out.push_back({x, "value(" + (x.empty() ? "-" : x.str()) + ") = " +
                              px.str() + " < value(x0)+value(x1) = " +
                              children.str()});
      }
    }
  }
  return out;
}

Dyadic finite_string_mass(const SemimeasureTable& tab, const BitString& x) {
  if (x.length() >= tab.depth())
    fail(Errc::depth_exceeded,
         "finite_string_mass needs |x| < depth, got |x| = " +
             std::to_string(x.length()));
  return tab.at(x) - tab.at(x.appended(0)) - tab.at(x.appended(1));
}

SemimeasureTable mix(const std::vector<SemimeasureTable>& tables,
                     const std::vector<Dyadic>& weights) {
  if (tables.empty() || tables.size() != weights.size())
    fail(Errc::invalid_input, "mix needs matching nonempty tables and weights");
  int depth = tables[0].depth();
  Dyadic total;
  for (const auto& w : weights) total += w;
  if (total > Dyadic::one())
    fail(Errc::weight_overflow, "mixture weights sum to " + total.str() + " > 1");
  for (const auto& t : tables)
    if (t.depth() != depth)
      fail(Errc::invalid_input, "mix requires equal table depths");
  SemimeasureTable out(depth);
  for (size_t i = 0; i < out.node_count(); ++i) {
    Dyadic acc;
    for (size_t k = 0; k < tables.size(); ++k)
      acc += weights[k] * tables[k].at_index(i);
    out.set_index(i, acc);
  }
  return out;
}

SemimeasureTable pad_semimeasure(const std::vector<int>& d, int depth) {
  if (int(d.size()) != depth + 1)
    fail(Errc::invalid_input, "margin schedule must cover lengths 0..D");
  for (int v : d)
    if (v < 0) fail(Errc::invalid_input, "negative margin exponent");
  Dyadic below_root;
  for (int m = 1; m <= depth; ++m) below_root += Dyadic::two_to_minus(d[m]);
  if (below_root > Dyadic::one())
    fail(Errc::weight_overflow,
         "margin schedule weight below the root is " + below_root.str() + " > 1");
  // tail(n) = sum_{n <= m <= D} 2^-d(m)
  std::vector<Dyadic> tail(size_t(depth) + 2);
  for (int m = depth; m >= 0; --m)
    tail[m] = tail[m + 1] + Dyadic::two_to_minus(d[m]);
  SemimeasureTable out(depth);
  for (int n = 0; n <= depth; ++n) {
    Dyadic value = Dyadic::two_to_minus(n) * tail[n];
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
      out.set(SemimeasureTable::node_string(n, v), value);
  }
  return out;
}

std::vector<Violation> validate_stages(const EnumerationStages& s) {
  std::vector<Violation> out;
  for (size_t t = 0; t < s.stages.size(); ++t) {
    auto v = validate(s.stages[t]);
    for (auto& violation : v) {
      violation.what = "stage " + std::to_string(t) + ": " + violation.what;
      out.push_back(violation);
    }
    if (t > 0) {
      if (s.stages[t].depth() != s.stages[t - 1].depth()) {
        out.push_back({BitString(), "stage " + std::to_string(t) +
                                        ": depth differs from previous stage"});
        continue;
      }
      for (size_t i = 0; i < s.stages[t].node_count(); ++i) {
        if (s.stages[t].at_index(i) < s.stages[t - 1].at_index(i)) {
          out.push_back(
              {BitString(), "stage " + std::to_string(t) + ": value decreased at node " +
                                std::to_string(i)});
        }
      }
    }
  }
  return out;
}

}  // namespace conecode
