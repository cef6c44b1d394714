#include "cuckoo_paging/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cuckoo_paging {

Config Config::make(double c, std::uint32_t m, std::uint32_t s, std::uint32_t kp,
                    std::uint32_t kb, std::uint32_t ell) {
  Config config{c, m, s, kp, kb, ell};
  config.validate();
  return config;
}

void Config::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (!(std::isfinite(c) && c >= 0.0)) fail("load factor c must be finite and non-negative");
  if (s == 0 || m == 0) fail("m and s must be positive");
  if (m % s != 0) fail("page size s must divide m");
  if (kp < 1) fail("k_p must be at least 1");
  if (kp > s || kb > s) fail("k_p and k_b must not exceed the page size");
  if (kb > 0 && pages() < 2) fail("a backup page needs at least two pages");
  if (ell < 1) fail("cell capacity ell must be at least 1");
  if (c * m >= 4294967295.0) fail("key count does not fit in 32 bits");
}

std::uint32_t Config::keys() const {
  return static_cast<std::uint32_t>(std::floor(c * static_cast<double>(m) + 0.5));
}

PageIndex page_of(CellIndex cell, const Config& config) {
  if (cell >= config.m) throw std::out_of_range("page_of: cell index out of range");
  return cell / config.s;
}

bool KeyChoices::is_backup_cell(CellIndex cell) const {
  return std::find(backup_cells.begin(), backup_cells.end(), cell) != backup_cells.end();
}

bool KeyChoices::has_cell(CellIndex cell) const {
  return std::find(primary_cells.begin(), primary_cells.end(), cell) != primary_cells.end() ||
         is_backup_cell(cell);
}

KeyChoices ChoiceStore::operator[](KeyId key) const {
  const std::size_t k = kp_ + kb_;
  const CellIndex* base = cells_.data() + static_cast<std::size_t>(key) * k;
  return KeyChoices{primary_page_[key], backup_page_[key], {base, kp_}, {base + kp_, kb_}};
}

void ChoiceStore::reserve(std::size_t keys) {
  primary_page_.reserve(keys);
  backup_page_.reserve(keys);
  cells_.reserve(keys * (kp_ + kb_));
}

KeyId ChoiceStore::draw(const Config& config, Rng& rng) {
  const auto id = static_cast<KeyId>(primary_page_.size());
  const std::uint32_t t = config.pages();
  const PageIndex p = rng.uniform_below(t);
  rng.sample_distinct_into(kp_, p * config.s, config.s, cells_);
  PageIndex b = kNoPage;
  if (kb_ > 0) {
    b = rng.uniform_below(t - 1);
    if (b >= p) ++b;
    rng.sample_distinct_into(kb_, b * config.s, config.s, cells_);
  }
  primary_page_.push_back(p);
  backup_page_.push_back(b);
  return id;
}

KeyId ChoiceStore::append(PageIndex primary_page, PageIndex backup_page,
                          std::span<const CellIndex> cells) {
  if (cells.size() != kp_ + kb_) throw std::invalid_argument("append: wrong number of cells");
  const auto id = static_cast<KeyId>(primary_page_.size());
  primary_page_.push_back(primary_page);
  backup_page_.push_back(backup_page);
  cells_.insert(cells_.end(), cells.begin(), cells.end());
  return id;
}

CuckooGraph generate(const Config& config, Rng& rng) {
  config.validate();
  CuckooGraph graph{config, ChoiceStore(config.kp, config.kb)};
  const std::uint32_t n = config.keys();
  graph.keys.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) graph.keys.draw(config, rng);
  return graph;
}

void write_graph(std::ostream& out, const CuckooGraph& graph) {
  for (KeyId key = 0; key < graph.size(); ++key) {
    const KeyChoices choices = graph[key];
    out << key << ' ' << choices.primary_page << ' ';
    if (choices.backup_page == kNoPage)
      out << '-';
    else
      out << choices.backup_page;
    for (CellIndex cell : choices.primary_cells) out << ' ' << cell;
    for (CellIndex cell : choices.backup_cells) out << ' ' << cell;
    out << '\n';
  }
}

CuckooGraph read_graph(std::istream& in, const Config& config) {
  config.validate();
  CuckooGraph graph{config, ChoiceStore(config.kp, config.kb)};
  std::string line;
  std::vector<CellIndex> cells(config.choices());
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw std::runtime_error("graph line " + std::to_string(line_no) + ": " + what);
    };
    std::istringstream fields(line);
    KeyId key = 0;
    PageIndex p = 0;
    std::string b_field;
    if (!(fields >> key >> p >> b_field)) fail("expected `key p b cells...`");
    if (key != graph.size()) fail("keys must be listed in order 0..n-1");
    PageIndex b = kNoPage;
    if (b_field != "-") {
      try {
        b = static_cast<PageIndex>(std::stoul(b_field));
      } catch (const std::exception&) {
        fail("bad backup page");
      }
    }
    for (auto& cell : cells)
      if (!(fields >> cell)) fail("too few cells");
    std::string extra;
    if (fields >> extra) fail("too many fields");

    if (p >= config.pages()) fail("primary page out of range");
    if (config.kb > 0 && (b == kNoPage || b >= config.pages() || b == p))
      fail("backup page must be a valid page different from the primary page");
    if (config.kb == 0 && b != kNoPage) fail("backup page given but k_b = 0");
    for (std::uint32_t i = 0; i < cells.size(); ++i) {
      const PageIndex want = i < config.kp ? p : b;
      if (cells[i] >= config.m || cells[i] / config.s != want) fail("cell not on its page");
      if (std::find(cells.begin(), cells.begin() + i, cells[i]) != cells.begin() + i)
        fail("duplicate cell");
    }
    graph.keys.append(p, b, cells);
  }
  return graph;
}

}  // namespace cuckoo_paging
