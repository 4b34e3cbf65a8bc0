// Copyright 2026 The replaydf-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "replaydf/audio.hpp"
#include "replaydf/errors.hpp"

namespace replaydf {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  ByteReader(std::span<const unsigned char> bytes, std::size_t pos)
      : bytes_(bytes), pos_(pos) {}

  std::uint16_t u16() {
    const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] |
                                                       (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::string tag() {
    std::string t(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return t;
  }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_;
};

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer decode_wav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12) throw FormatError("RIFF", "file shorter than RIFF header");
  ByteReader header(bytes, 0);
  if (header.tag() != "RIFF") throw FormatError("RIFF", "missing RIFF tag");
  header.u32();  // declared size; trusted only as far as the real length
  if (header.tag() != "WAVE") throw FormatError("RIFF", "form type is not WAVE");

  std::optional<FmtChunk> fmt;
  std::span<const unsigned char> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    ByteReader r(bytes, pos);
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) {
      // Some writers leave a streaming placeholder size on the data chunk.
      if (id != "data") throw FormatError(id, "chunk size exceeds file length");
    }
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (id == "fmt ") {
      if (size < 16) throw FormatError(id, "chunk smaller than 16 bytes");
      ByteReader f(bytes, body);
      FmtChunk c;
      c.format = f.u16();
      c.channels = f.u16();
      c.sample_rate = f.u32();
      f.u32();  // byte rate
      f.u16();  // block align
      c.bits = f.u16();
      if (c.format == kFormatExtensible) {
        if (size < 40) throw FormatError(id, "extensible format chunk too small");
        ByteReader ext(bytes, body + 24);
        c.format = ext.u16();  // first two bytes of the subformat GUID
      }
      if (c.channels == 0) throw FormatError(id, "zero channels");
      if (c.sample_rate == 0) throw FormatError(id, "zero sample rate");
      fmt = c;
    } else if (id == "data") {
      data = bytes.subspan(body, avail);
      have_data = true;
    }
    pos = body + avail + (avail & 1u);
  }
  if (!fmt) throw FormatError("fmt ", "chunk missing");
  if (!have_data) throw FormatError("data", "chunk missing");

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw UnsupportedEncodingError(
        "unsupported WAV encoding: format tag " + std::to_string(fmt->format) +
        " with " + std::to_string(fmt->bits) + " bits per sample");
  }
  const std::size_t width = fmt->bits / 8;
  const std::size_t frame = width * fmt->channels;
  if (data.size() % frame != 0) {
    throw FormatError("data", "size is not a multiple of the frame size");
  }
  const std::size_t frames = data.size() / frame;
  AudioBuffer out;
  out.sample_rate = static_cast<int>(fmt->sample_rate);
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < fmt->channels; ++ch) {
      const unsigned char* p = data.data() + i * frame + ch * width;
      if (pcm16) {
        const auto code = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        acc += code / 32768.0;
      } else {
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                                   (static_cast<std::uint32_t>(p[1]) << 8) |
                                   (static_cast<std::uint32_t>(p[2]) << 16) |
                                   (static_cast<std::uint32_t>(p[3]) << 24);
        acc += static_cast<double>(std::bit_cast<float>(bits));
      }
    }
    out.samples[i] = fmt->channels == 1 ? acc : acc / fmt->channels;
  }
  return out;
}

std::vector<unsigned char> encode_wav(const AudioBuffer& buffer,
                                      WavEncoding encoding) {
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(buffer.samples.size() * (bits / 8));
  // Float files carry cbSize and a fact chunk as WAVE_FORMAT_IEEE_FLOAT requires.
  const std::uint32_t fmt_size = pcm16 ? 16 : 18;
  const std::uint32_t fact_bytes = pcm16 ? 0 : 12;

  std::vector<unsigned char> out;
  out.reserve(44 + fact_bytes + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 4 + (8 + fmt_size) + fact_bytes + (8 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, fmt_size);
  put_u16(out, pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  if (!pcm16) {
    put_u16(out, 0);
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, static_cast<std::uint32_t>(buffer.samples.size()));
  }
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : buffer.samples) {
    if (pcm16) {
      const double clamped = std::clamp(s, -1.0, 1.0 - 1.0 / 32768.0);
      const auto code = static_cast<std::int16_t>(std::lround(clamped * 32768.0));
      put_u16(out, static_cast<std::uint16_t>(code));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  return out;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const FormatError& e) {
    throw FormatError(e.chunk(), e.detail() + " in " + path.string());
  } catch (const UnsupportedEncodingError& e) {
    throw UnsupportedEncodingError(path.string() + ": " + e.what());
  }
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               WavEncoding encoding) {
  if (buffer.sample_rate <= 0) throw InputError("write_wav: sample rate must be positive");
  const auto bytes = encode_wav(buffer, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace replaydf
