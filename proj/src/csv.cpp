#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <openssl/evp.h>

#include "wgqed/errors.hpp"
#include "wgqed/scenario.hpp"

namespace wgqed {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("could not format a floating-point value");
  return {buf.data(), end};
}

std::string format_trace_csv(const AmplitudeTrace& trace, double time_unit) {
  std::string out = "t_gamma,re,im,abs,prob\n";
  out.reserve(out.size() + trace.size() * 96);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& a = trace.amplitudes[i];
    const double mag = std::abs(a);
    out += format_double(trace.times[i] * time_unit);
    out += ',';
    out += format_double(a.real());
    out += ',';
    out += format_double(a.imag());
    out += ',';
    out += format_double(mag);
    out += ',';
    out += format_double(mag * mag);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error("cannot write " + path.string());
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string engine_version() { return std::string("wgqed ") + WGQED_VERSION; }

}  // namespace wgqed
