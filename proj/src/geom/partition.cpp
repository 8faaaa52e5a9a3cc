#include "sobex/geom/partition.hpp"

#include <algorithm>

namespace sobex::geom {

namespace {
std::uint64_t pack3(std::int64_t x, std::int64_t y, std::int64_t z) {
  return (static_cast<std::uint64_t>(x & 0x1FFFFF) << 42) | (static_cast<std::uint64_t>(y & 0x1FFFFF) << 21) |
         static_cast<std::uint64_t>(z & 0x1FFFFF);
}
}  // namespace

PartitionFamily::PartitionFamily(const WhitneyCover* cover, std::vector<int> members)
    : cover_(cover), members_(std::move(members)) {
  std::unordered_map<int, std::size_t> level_slot;
  for (std::size_t m = 0; m < members_.size(); ++m) {
    const auto& q = cover_->cubes[members_[m]].cube;
    auto it = level_slot.find(q.level);
    if (it == level_slot.end()) {
      level_slot[q.level] = tables_.size();
      tables_.push_back({q.level, {}});
      it = level_slot.find(q.level);
    }
    tables_[it->second].cells[pack3(q.idx[0], q.idx[1], q.idx[2])] = static_cast<int>(m);
  }
}

void PartitionFamily::candidates(const Pt& x, std::vector<int>& out) const {
  out.clear();
  int n = cover_->frame.n;
  for (const auto& t : tables_) {
    DyadicCube at = cover_->frame.locate(x, t.level);
    int zr = n >= 3 ? 1 : 0;
    for (int dz = -zr; dz <= zr; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          auto it = t.cells.find(pack3(at.idx[0] + dx, at.idx[1] + dy, at.idx[2] + dz));
          if (it != t.cells.end()) out.push_back(it->second);
        }
  }
}

std::vector<PartitionFamily::Term> PartitionFamily::evaluate(const Pt& x) const {
  std::vector<int> cand;
  candidates(x, cand);
  std::vector<Term> terms;
  double total = 0;
  for (int m : cand) {
    double b = cube_bump(x, member_box(m));
    if (b > 0) {
      terms.push_back({m, b});
      total += b;
    }
  }
  if (terms.empty()) {
    if (in_union(x)) throw DegenerateCover("zero bump sum at a point of the cube union");
    return terms;
  }
  for (auto& t : terms) t.phi /= total;
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.member < b.member; });
  return terms;
}

bool PartitionFamily::in_union(const Pt& x) const {
  std::vector<int> cand;
  candidates(x, cand);
  for (int m : cand) {
    Box b = member_box(m);
    bool in = true;
    for (int i = 0; i < b.n; ++i)
      if (x[i] < b.lo[i] || x[i] > b.hi[i]) in = false;
    if (in) return true;
  }
  return false;
}

}  // namespace sobex::geom
