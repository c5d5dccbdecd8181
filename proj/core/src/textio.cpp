#include "conecode/textio.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace conecode {

namespace {

std::vector<std::vector<std::string>> tokenize(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

int parse_int(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::parse_error, std::string("bad ") + what + ": " + s);
  }
}

}  // namespace

std::string render_bits(const BitString& x) {
  return x.empty() ? std::string("-") : x.str();
}

void write_table(std::ostream& out, const SemimeasureTable& tab) {
  out << "depth " << tab.depth() << "\n";
  for (int n = 0; n <= tab.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      const Dyadic& value = tab.at(x);
      if (!value.is_zero())
        out << render_bits(x) << " " << value.str() << "\n";
    }
  }
}

SemimeasureTable read_table(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "depth")
    fail(Errc::parse_error, "table file must start with `depth <D>`");
  int depth = parse_int(lines[0][1], "depth");
  SemimeasureTable tab(depth);
  std::vector<bool> seen(tab.node_count(), false);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != 2)
      fail(Errc::parse_error, "table record needs two fields");
    BitString x = BitString::parse(lines[i][0]);
    if (x.length() > depth)
      fail(Errc::parse_error, "table record deeper than header depth: " + x.str());
    size_t idx = SemimeasureTable::node_index(x);
    if (seen[idx]) fail(Errc::parse_error, "duplicate table record: " + lines[i][0]);
    seen[idx] = true;
    tab.set(x, Dyadic::parse(lines[i][1]));
  }
  return tab;
}

void write_allocation(std::ostream& out, const Allocation& a) {
  out << "depth " << a.depth() << "\n";
  const auto& sched = a.schedule();
  if (sched.is_per_length()) {
    out << "schedule length";
    for (int n = 0; n <= a.depth(); ++n) out << " " << sched.at_length(n);
    out << "\n";
  } else {
    out << "schedule budget\n";
    for (int n = 0; n <= a.depth(); ++n)
      for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
        BitString x = SemimeasureTable::node_string(n, v);
        out << "g " << render_bits(x) << " " << sched.at(x) << "\n";
      }
  }
  for (int n = 0; n <= a.depth(); ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      BitString x = SemimeasureTable::node_string(n, v);
      int g = sched.at(x);
      for (uint64_t stem : a.stems(x))
        out << "alloc " << render_bits(x) << " " << BitString(stem, g).str()
            << "\n";
    }
  }
}

Allocation read_allocation(std::istream& in) {
  auto lines = tokenize(in);
  size_t pos = 0;
  if (pos >= lines.size() || lines[pos].size() != 2 || lines[pos][0] != "depth")
    fail(Errc::parse_error, "allocation dump must start with `depth <D>`");
  int depth = parse_int(lines[pos][1], "depth");
  if (depth < 0 || depth > kMaxTableDepth)
    fail(Errc::depth_exceeded, "allocation depth out of range");
  ++pos;
  if (pos >= lines.size() || lines[pos][0] != "schedule" || lines[pos].size() < 2)
    fail(Errc::parse_error, "allocation dump missing `schedule` header");
  GranularitySchedule sched;
  if (lines[pos][1] == "length") {
    std::vector<int> g;
    for (size_t k = 2; k < lines[pos].size(); ++k)
      g.push_back(parse_int(lines[pos][k], "granularity"));
    if (int(g.size()) != depth + 1)
      fail(Errc::parse_error, "per-length schedule must list D+1 values");
    sched = GranularitySchedule::per_length(std::move(g));
    ++pos;
  } else if (lines[pos][1] == "budget") {
    ++pos;
    std::vector<int> g((size_t(1) << (depth + 1)) - 1, -1);
    while (pos < lines.size() && lines[pos][0] == "g") {
      if (lines[pos].size() != 3)
        fail(Errc::parse_error, "granularity record needs `g <node> <bits>`");
      BitString x = BitString::parse(lines[pos][1]);
      if (x.length() > depth)
        fail(Errc::parse_error, "granularity record deeper than depth");
      g[SemimeasureTable::node_index(x)] = parse_int(lines[pos][2], "granularity");
      ++pos;
    }
    for (int v : g)
      if (v < 0) fail(Errc::parse_error, "per-string schedule is incomplete");
    sched = GranularitySchedule::per_string(depth, std::move(g));
  } else {
    fail(Errc::parse_error, "unknown schedule kind: " + lines[pos][1]);
  }
  std::vector<std::vector<uint64_t>> cones((size_t(1) << (depth + 1)) - 1);
  for (; pos < lines.size(); ++pos) {
    if (lines[pos][0] != "alloc" || lines[pos].size() != 3)
      fail(Errc::parse_error, "expected `alloc <output> <stem>` record");
    BitString x = BitString::parse(lines[pos][1]);
    if (x.length() > depth) fail(Errc::parse_error, "alloc record deeper than depth");
    BitString stem = BitString::parse(lines[pos][2]);
    if (stem.length() != sched.at(x))
      fail(Errc::parse_error,
           "stem length does not match the schedule at " + lines[pos][1]);
    cones[SemimeasureTable::node_index(x)].push_back(stem.value());
  }
  return make_allocation_unchecked(depth, std::move(sched), std::move(cones));
}

void write_test_assignment(std::ostream& out, const TestAssignment& t) {
  out << "leafbits " << t.leaf_bits() << "\n";
  for (uint64_t leaf = 0; leaf < t.leaf_count(); ++leaf)
    if (!t.at(leaf).is_zero())
      out << BitString(leaf, t.leaf_bits()).str() << " " << t.at(leaf).str()
          << "\n";
}

TestAssignment read_test_assignment(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "leafbits")
    fail(Errc::parse_error, "test assignment must start with `leafbits <L>`");
  int leaf_bits = parse_int(lines[0][1], "leafbits");
  if (leaf_bits < 1 || leaf_bits > 22)
    fail(Errc::parse_error, "leafbits out of range 1..22");
  std::vector<Dyadic> values(size_t(1) << leaf_bits);
  std::vector<bool> seen(values.size(), false);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != 2)
      fail(Errc::parse_error, "test record needs two fields");
    BitString leaf = BitString::parse(lines[i][0]);
    if (leaf.length() != leaf_bits)
      fail(Errc::parse_error, "test record leaf has wrong length");
    if (seen[leaf.value()])
      fail(Errc::parse_error, "duplicate test record: " + lines[i][0]);
    seen[leaf.value()] = true;
    values[leaf.value()] = Dyadic::parse(lines[i][1]);
  }
  return TestAssignment(leaf_bits, std::move(values));
}

}  // namespace conecode
