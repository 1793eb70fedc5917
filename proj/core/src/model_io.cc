#include "stance/model_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <vector>

namespace stance {
namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t line_number() const { return line_; }

  std::string_view next() {
    if (done()) throw ParseError("model dump: unexpected end of input after line " + std::to_string(line_));
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_;
    return line;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::vector<std::string_view> fields(std::string_view line, char sep = ' ') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

long parse_long(std::string_view s) {
  std::string tmp(s);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(tmp.c_str(), &end, 10);
  if (errno != 0 || end != tmp.c_str() + tmp.size() || tmp.empty()) {
    throw ParseError("model dump: bad integer '" + tmp + "'");
  }
  return v;
}

void write_header(std::string& out, std::string_view kind) {
  out += "stance-model " + std::to_string(kModelFormatVersion) + "\n";
  out += "kind ";
  out += kind;
  out += '\n';
}

void write_tensor(std::string& out, std::string_view name, const Eigen::MatrixXd& m) {
  out += "tensor ";
  out += name;
  out += ' ' + std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += format_exact(m(r, c));
    }
    out += '\n';
  }
}

struct Dump {
  std::string kind;
  std::map<std::string, long> params;
  std::map<std::string, Eigen::MatrixXd> tensors;
  std::vector<std::string_view> body;  // non-tensor lines, for pmi
};

Dump read_dump(std::string_view text) {
  LineReader in(text);
  Dump d;
  auto magic = fields(in.next());
  if (magic.size() != 2 || magic[0] != "stance-model") throw ParseError("model dump: missing 'stance-model' header");
  if (parse_long(magic[1]) != kModelFormatVersion) {
    throw ParseError("model dump: unsupported version " + std::string(magic[1]));
  }
  auto kind = fields(in.next());
  if (kind.size() != 2 || kind[0] != "kind") throw ParseError("model dump: missing 'kind' line");
  d.kind = std::string(kind[1]);
  while (true) {
    std::string_view line = in.next();
    if (line == "end") break;
    auto f = fields(line);
    if (!f.empty() && f[0] == "param") {
      if (f.size() != 3) throw ParseError("model dump: bad param line " + std::to_string(in.line_number()));
      d.params[std::string(f[1])] = parse_long(f[2]);
    } else if (!f.empty() && f[0] == "tensor") {
      if (f.size() != 4) throw ParseError("model dump: bad tensor line " + std::to_string(in.line_number()));
      const long rows = parse_long(f[2]);
      const long cols = parse_long(f[3]);
      if (rows < 0 || cols < 0) throw ParseError("model dump: negative tensor shape");
      Eigen::MatrixXd m(rows, cols);
      for (long r = 0; r < rows; ++r) {
        auto values = fields(in.next());
        if (static_cast<long>(values.size()) != cols) {
          throw ParseError("model dump: tensor '" + std::string(f[1]) + "' row " + std::to_string(r) +
                           " has " + std::to_string(values.size()) + " values, expected " + std::to_string(cols));
        }
        for (long c = 0; c < cols; ++c) m(r, c) = parse_exact(values[static_cast<std::size_t>(c)]);
      }
      d.tensors[std::string(f[1])] = std::move(m);
    } else {
      d.body.push_back(line);
    }
  }
  return d;
}

const Eigen::MatrixXd& tensor(const Dump& d, const std::string& name, long rows, long cols) {
  auto it = d.tensors.find(name);
  if (it == d.tensors.end()) throw ParseError("model dump: missing tensor '" + name + "'");
  if ((rows >= 0 && it->second.rows() != rows) || (cols >= 0 && it->second.cols() != cols)) {
    throw ParseError("model dump: tensor '" + name + "' has the wrong shape");
  }
  return it->second;
}

void expect_kind(const Dump& d, std::string_view kind) {
  if (d.kind != kind) throw ParseError("model dump: expected kind '" + std::string(kind) + "', got '" + d.kind + "'");
}

}  // namespace

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_exact(std::string_view text) {
  std::string tmp(text);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw ParseError("model dump: bad number '" + tmp + "'");
  return v;
}

std::string peek_model_kind(std::string_view dump) { return read_dump(dump).kind; }

std::string dump_logreg(const LogRegModel& model) {
  std::string out;
  write_header(out, "logreg");
  write_tensor(out, "weights", model.weights);
  write_tensor(out, "biases", model.biases);
  out += "end\n";
  return out;
}

LogRegModel parse_logreg(std::string_view text) {
  const Dump d = read_dump(text);
  expect_kind(d, "logreg");
  LogRegModel m;
  m.weights = tensor(d, "weights", kNumClasses, -1);
  m.biases = tensor(d, "biases", kNumClasses, 1);
  return m;
}

std::string dump_cnn(const CnnModel& model, int max_len) {
  std::string out;
  write_header(out, "cnn");
  out += "param width " + std::to_string(model.width) + "\n";
  out += "param max_len " + std::to_string(max_len) + "\n";
  write_tensor(out, "filters", model.filters);
  write_tensor(out, "filter_biases", model.filter_biases);
  write_tensor(out, "output_weights", model.output_weights);
  write_tensor(out, "output_biases", model.output_biases);
  out += "end\n";
  return out;
}

CnnModel parse_cnn(std::string_view text, int* max_len) {
  const Dump d = read_dump(text);
  expect_kind(d, "cnn");
  auto width = d.params.find("width");
  if (width == d.params.end() || width->second <= 0) throw ParseError("model dump: cnn needs a positive width");
  CnnModel m;
  m.width = static_cast<int>(width->second);
  m.filters = tensor(d, "filters", -1, -1);
  const long nf = m.filters.rows();
  if (m.filters.cols() % m.width != 0) throw ParseError("model dump: filter length is not a multiple of width");
  m.filter_biases = tensor(d, "filter_biases", nf, 1);
  m.output_weights = tensor(d, "output_weights", kNumClasses, nf);
  m.output_biases = tensor(d, "output_biases", kNumClasses, 1);
  if (max_len) {
    auto it = d.params.find("max_len");
    *max_len = it == d.params.end() ? kDefaultMaxLen : static_cast<int>(it->second);
  }
  return m;
}

std::string dump_pmi(const PmiTable& table) {
  std::string out;
  write_header(out, "pmi");
  for (const auto& [hashtag, scores] : table.entries()) {
    out += "hashtag\t" + hashtag;
    for (double s : scores) out += '\t' + format_exact(s);
    out += '\n';
  }
  out += "end\n";
  return out;
}

PmiTable parse_pmi(std::string_view text) {
  const Dump d = read_dump(text);
  expect_kind(d, "pmi");
  PmiTable table;
  for (std::string_view line : d.body) {
    auto f = fields(line, '\t');
    if (f.size() != 2 + kNumClasses || f[0] != "hashtag") {
      throw ParseError("model dump: bad pmi line '" + std::string(line) + "'");
    }
    PmiTable::Scores s{};
    for (int c = 0; c < kNumClasses; ++c) s[static_cast<std::size_t>(c)] = parse_exact(f[2 + static_cast<std::size_t>(c)]);
    table.set(std::string(f[1]), s);
  }
  return table;
}

}  // namespace stance
