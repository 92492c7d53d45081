// SPDX-License-Identifier: Apache-2.0
#include "robotid/core/sequence_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "robotid/core/angles.hpp"

namespace robotid::core {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

class Tokens {
 public:
  Tokens(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  std::string_view next() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    if (pos_ >= line_.size()) fail("unexpected end of line");
    std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    return line_.substr(start, pos_ - start);
  }

  void expect(std::string_view tag) {
    if (next() != tag) fail("expected '" + std::string(tag) + "'");
  }

  double real() {
    std::string_view tok = next();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail("bad number '" + std::string(tok) + "'");
    }
    return v;
  }

  template <typename Int>
  Int integer() {
    std::string_view tok = next();
    Int v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail("bad integer '" + std::string(tok) + "'");
    }
    return v;
  }

  void finish() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    if (pos_ != line_.size()) fail("trailing tokens");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "robotid-sequence";

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void validate_frame(const FrameRecord& frame, int n_robots, int n_slots) {
  const FrameInput& in = frame.input;
  if (static_cast<int>(in.slots.size()) != n_slots) {
    throw std::invalid_argument("frame " + std::to_string(in.t) + ": slot count " +
                                std::to_string(in.slots.size()) + " != M=" +
                                std::to_string(n_slots));
  }
  if (static_cast<int>(in.broadcasts.size()) != n_robots) {
    throw std::invalid_argument("frame " + std::to_string(in.t) + ": broadcast count mismatch");
  }
  if (static_cast<int>(frame.label.classes.size()) != n_slots) {
    throw std::invalid_argument("frame " + std::to_string(in.t) + ": label count mismatch");
  }
  if (!frame.truth.empty() && static_cast<int>(frame.truth.size()) != n_robots) {
    throw std::invalid_argument("frame " + std::to_string(in.t) + ": truth count mismatch");
  }
  for (double b : in.broadcasts) {
    if (!std::isfinite(b) || b < -kPi || b >= kPi) {
      throw std::invalid_argument("broadcast heading outside [-pi, pi)");
    }
  }
  for (const Detection& d : in.slots) {
    if (!in_unit(d.gamma)) throw std::invalid_argument("gamma outside [0, 1]");
    if (d.empty()) {
      if (d.x != 0.0 || d.y != 0.0 || d.phi != 0.0) {
        throw std::invalid_argument("empty slot with non-zero fields");
      }
      continue;
    }
    if (!in_unit(d.x) || !in_unit(d.y)) throw std::invalid_argument("detection outside [0, 1]^2");
    if (!(d.phi >= -kPi && d.phi < kPi)) throw std::invalid_argument("detection phi outside [-pi, pi)");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_robots) + 1, false);
  for (int c : frame.label.classes) {
    if (c < 0 || c > n_robots) throw std::invalid_argument("label class out of range");
    if (c > 0) {
      if (seen[static_cast<std::size_t>(c)]) {
        throw std::invalid_argument("robot " + std::to_string(c) + " labelled in two slots");
      }
      seen[static_cast<std::size_t>(c)] = true;
    }
  }
}

void validate_sequence(const SequenceRecord& record) {
  const SequenceMeta& m = record.meta;
  if (m.n_robots < 1 || m.n_slots < m.n_robots) {
    throw std::invalid_argument("sequence requires N >= 1 and M >= N");
  }
  if (!(m.field_width > 0.0) || !(m.field_height > 0.0) || !(m.frame_rate > 0.0)) {
    throw std::invalid_argument("field size and frame rate must be positive");
  }
  for (std::size_t k = 0; k < record.frames.size(); ++k) {
    const FrameRecord& f = record.frames[k];
    validate_frame(f, m.n_robots, m.n_slots);
    if (f.input.t != record.frames.front().input.t + static_cast<std::int64_t>(k)) {
      throw std::invalid_argument("frame indices are not contiguous");
    }
  }
}

void write_sequence(const SequenceRecord& record, std::ostream& out) {
  validate_sequence(record);
  const SequenceMeta& m = record.meta;
  out << kMagic << ' ' << kSequenceFormatVersion << '\n'
      << "n_robots " << m.n_robots << '\n'
      << "n_slots " << m.n_slots << '\n'
      << "field_width " << format_double(m.field_width) << '\n'
      << "field_height " << format_double(m.field_height) << '\n'
      << "frame_rate " << format_double(m.frame_rate) << '\n'
      << "sigma_x " << format_double(m.sigma_x) << '\n'
      << "sigma_y " << format_double(m.sigma_y) << '\n'
      << "sigma_phi " << format_double(m.sigma_phi) << '\n'
      << "p_fn " << format_double(m.p_fn) << '\n'
      << "p_fp " << format_double(m.p_fp) << '\n'
      << "seed " << m.seed << '\n'
      << "frames " << record.frames.size() << '\n';
  std::string line;
  for (const FrameRecord& f : record.frames) {
    line.clear();
    line += "f ";
    line += std::to_string(f.input.t);
    line += " b";
    for (double b : f.input.broadcasts) {
      line += ' ';
      line += format_double(b);
    }
    line += " d";
    for (const Detection& d : f.input.slots) {
      for (double v : {d.x, d.y, d.phi, d.gamma}) {
        line += ' ';
        line += format_double(v);
      }
    }
    line += " l";
    for (int c : f.label.classes) {
      line += ' ';
      line += std::to_string(c);
    }
    line += " g ";
    line += std::to_string(f.truth.size());
    for (const RobotPose& p : f.truth) {
      for (double v : {p.x, p.y, p.phi}) {
        line += ' ';
        line += format_double(v);
      }
      line += p.present ? " 1" : " 0";
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write_sequence: stream failure");
}

void write_sequence(const SequenceRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_sequence(record, out);
}

SequenceRecord read_sequence(std::istream& in) {
  SequenceRecord rec;
  SequenceMeta& m = rec.meta;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> Tokens {
    if (!std::getline(in, line)) {
      throw FormatError("truncated sequence file after line " + std::to_string(line_no));
    }
    ++line_no;
    return Tokens(line, line_no);
  };

  {
    Tokens t = next_line();
    if (t.next() != kMagic) t.fail("not a sequence file");
    int version = t.integer<int>();
    if (version != kSequenceFormatVersion) {
      t.fail("unsupported format version " + std::to_string(version));
    }
    t.finish();
  }
  auto header = [&](std::string_view key, auto& field) {
    Tokens t = next_line();
    t.expect(key);
    using T = std::remove_reference_t<decltype(field)>;
    if constexpr (std::is_floating_point_v<T>) {
      field = t.real();
    } else {
      field = t.template integer<T>();
    }
    t.finish();
  };
  header("n_robots", m.n_robots);
  header("n_slots", m.n_slots);
  header("field_width", m.field_width);
  header("field_height", m.field_height);
  header("frame_rate", m.frame_rate);
  header("sigma_x", m.sigma_x);
  header("sigma_y", m.sigma_y);
  header("sigma_phi", m.sigma_phi);
  header("p_fn", m.p_fn);
  header("p_fp", m.p_fp);
  header("seed", m.seed);
  std::size_t n_frames = 0;
  header("frames", n_frames);
  if (m.n_robots < 1 || m.n_slots < m.n_robots || m.n_slots > 4096) {
    throw FormatError("invalid shape in header");
  }

  rec.frames.reserve(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    Tokens t = next_line();
    FrameRecord f;
    t.expect("f");
    f.input.t = t.integer<std::int64_t>();
    t.expect("b");
    f.input.broadcasts.resize(static_cast<std::size_t>(m.n_robots));
    for (double& b : f.input.broadcasts) b = t.real();
    t.expect("d");
    f.input.slots.resize(static_cast<std::size_t>(m.n_slots));
    for (Detection& d : f.input.slots) {
      d.x = t.real();
      d.y = t.real();
      d.phi = t.real();
      d.gamma = t.real();
    }
    t.expect("l");
    f.label.classes.resize(static_cast<std::size_t>(m.n_slots));
    for (int& c : f.label.classes) c = t.integer<int>();
    t.expect("g");
    auto n_truth = t.integer<std::size_t>();
    if (n_truth != 0 && n_truth != static_cast<std::size_t>(m.n_robots)) {
      t.fail("truth count mismatch");
    }
    f.truth.resize(n_truth);
    for (RobotPose& p : f.truth) {
      p.x = t.real();
      p.y = t.real();
      p.phi = t.real();
      int present = t.integer<int>();
      if (present != 0 && present != 1) t.fail("present flag must be 0 or 1");
      p.present = present == 1;
    }
    t.finish();
    rec.frames.push_back(std::move(f));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": data after last frame");
    }
  }
  try {
    validate_sequence(rec);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invariant violation: ") + e.what());
  }
  return rec;
}

SequenceRecord read_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_sequence(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::vector<std::filesystem::path> out;
  const std::filesystem::path base = path.parent_path();
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::filesystem::path p(line);
    out.push_back(p.is_absolute() ? p : base / p);
  }
  return out;
}

void write_manifest(const std::vector<std::filesystem::path>& entries,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& e : entries) out << e.generic_string() << '\n';
  if (!out) throw std::runtime_error("write_manifest: stream failure");
}

}  // namespace robotid::core
