#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "judgeattack/errors.hpp"
#include "judgeattack/judge.hpp"

namespace judgeattack {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_all(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) put_f64(out, v);
}

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::uint64_t u64() {
    std::array<unsigned char, 8> bytes{};
    in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in_.gcount() != 8) throw ParseError(name_ + ": truncated parameter file");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::vector<double> f64s(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }

 private:
  std::istream& in_;
  std::string name_;
};

// Guards allocation sizes read from untrusted headers.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

}  // namespace

void save_params(const ToyJudgeParams& params, const std::filesystem::path& path) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write parameter file " + path.string());
  put_u64(out, params.vocab_size);
  put_u64(out, params.dim);
  put_f64(out, params.gamma);
  put_u64(out, params.seed);
  put_u64(out, params.lexicon.size());
  for (TokenId t : params.lexicon) put_u64(out, t);
  put_all(out, params.embeddings);
  put_all(out, params.head_a);
  put_all(out, params.head_b);
  put_all(out, params.coupling);
  for (const auto& m : params.marker_heads) put_all(out, m);
  if (!out) throw ConfigError("failed writing parameter file " + path.string());
}

ToyJudgeParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open parameter file " + path.string());
  Reader r(in, path.string());
  ToyJudgeParams p;
  const std::uint64_t vocab_size = r.u64();
  const std::uint64_t dim = r.u64();
  if (dim == 0 || vocab_size > kMaxElements || dim > kMaxElements / std::max<std::uint64_t>(vocab_size, 1) ||
      dim * dim > kMaxElements) {
    throw ParseError(path.string() + ": implausible parameter dimensions");
  }
  p.vocab_size = vocab_size;
  p.dim = dim;
  p.gamma = r.f64();
  p.seed = r.u64();
  const std::uint64_t n_lex = r.u64();
  if (n_lex > vocab_size) throw ParseError(path.string() + ": lexicon larger than vocabulary");
  for (std::uint64_t k = 0; k < n_lex; ++k) {
    const std::uint64_t t = r.u64();
    if (t >= vocab_size) throw ParseError(path.string() + ": lexicon id outside the vocabulary");
    p.lexicon.push_back(static_cast<TokenId>(t));
  }
  p.embeddings = r.f64s(vocab_size * dim);
  p.head_a = r.f64s(dim);
  p.head_b = r.f64s(dim);
  p.coupling = r.f64s(dim * dim);
  for (std::uint64_t k = 0; k < n_lex; ++k) p.marker_heads.push_back(r.f64s(dim));
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError(path.string() + ": trailing bytes");
  p.validate();
  return p;
}

}  // namespace judgeattack
