#include "nrt/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nrt/data.hpp"

namespace nrt::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw std::runtime_error("error while writing " + path.string());
}

std::vector<std::uint64_t> parse_row(const std::string& line, std::size_t expected, const std::string& file,
                                     std::size_t lineno) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    std::string field = line.substr(start, end - start);
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || p != field.data() + field.size() || field.empty())
      throw ParseError(file, lineno, "field '" + field + "' is not a nonnegative integer");
    out.push_back(v);
    start = end + 1;
  }
  if (out.size() != expected)
    throw ParseError(file, lineno, "expected " + std::to_string(expected) + " fields");
  return out;
}

void fnv(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, p);
}

void write_corpus_csv(const std::filesystem::path& path, const Corpus& corpus) {
  auto os = open_out(path);
  os << "doc,word,count\n";
  for (const Cell& c : corpus.cells()) os << c.doc << ',' << c.word << ',' << c.count << '\n';
  finish(os, path);
}

void write_edges_csv(const std::filesystem::path& path, const DocumentNetwork& network) {
  auto os = open_out(path);
  os << "src,dst\n";
  for (auto [a, b] : network.edges()) os << a << ',' << b << '\n';
  finish(os, path);
}

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace) {
  auto os = open_out(path);
  os << "iter,loglik,k_active\n";
  for (const TraceRecord& r : trace.records) os << r.iter << ',' << format_double(r.loglik) << ',' << r.k_active << '\n';
  finish(os, path);
}

void write_histogram_csv(const std::filesystem::path& path, const std::map<std::size_t, std::size_t>& hist) {
  auto os = open_out(path);
  os << "k_active,count\n";
  for (auto [k, c] : hist) os << k << ',' << c << '\n';
  finish(os, path);
}

Corpus read_corpus_csv(const std::filesystem::path& path, std::size_t num_docs, std::size_t vocab_size) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<Cell> cells;
  std::size_t max_doc = 0, max_word = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line.rfind("doc,word,count", 0) != 0) throw ParseError(path.string(), 1, "missing doc,word,count header");
      continue;
    }
    if (line.empty() || line == "\r") continue;
    auto row = parse_row(line, 3, path.string(), lineno);
    if (row[0] > 0xffffffffull || row[1] > 0xffffffffull || row[2] > 0xffffffffull)
      throw ParseError(path.string(), lineno, "value too large");
    cells.push_back({static_cast<std::uint32_t>(row[0]), static_cast<std::uint32_t>(row[1]),
                     static_cast<std::uint32_t>(row[2])});
    max_doc = std::max<std::size_t>(max_doc, row[0] + 1);
    max_word = std::max<std::size_t>(max_word, row[1] + 1);
  }
  if (lineno == 0) throw ParseError(path.string(), 0, "empty file");
  return Corpus(num_docs ? num_docs : max_doc, vocab_size ? vocab_size : max_word, std::move(cells));
}

DocumentNetwork read_edges_csv(const std::filesystem::path& path, std::size_t num_docs) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  DocumentNetwork net(num_docs);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line.rfind("src,dst", 0) != 0) throw ParseError(path.string(), 1, "missing src,dst header");
      continue;
    }
    if (line.empty() || line == "\r") continue;
    auto row = parse_row(line, 2, path.string(), lineno);
    if (row[0] >= num_docs || row[1] >= num_docs) throw ParseError(path.string(), lineno, "document id out of range");
    net.add_edge(row[0], row[1]);
  }
  return net;
}

std::string dataset_fingerprint(const Corpus& corpus, const DocumentNetwork& network) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  fnv(h, corpus.num_docs());
  fnv(h, corpus.vocab_size());
  for (const Cell& c : corpus.cells()) {
    fnv(h, c.doc);
    fnv(h, c.word);
    fnv(h, c.count);
  }
  for (auto [a, b] : network.edges()) {
    fnv(h, a);
    fnv(h, b);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nrt::io
