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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "replaydf/audio.hpp"
#include "replaydf/errors.hpp"
#include "test_support.hpp"

using namespace replaydf;
using replaydf::testing::TempDir;

namespace {

std::vector<double> float_representable(std::mt19937_64& gen, std::size_t n) {
  std::vector<double> v = oracle::random_vector(gen, n);
  for (auto& x : v) x = static_cast<float>(x);
  return v;
}

AudioBuffer sine(double hz, double seconds, int rate, double amp = 1.0) {
  const auto n = static_cast<std::size_t>(seconds * rate);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return {std::move(s), rate};
}

// Offset of the payload of the first chunk with the given id.
std::size_t chunk_payload(const std::vector<unsigned char>& b, const char* id,
                          std::uint32_t* size) {
  for (std::size_t pos = 12; pos + 8 <= b.size();) {
    const std::uint32_t sz = b[pos + 4] | (b[pos + 5] << 8) | (b[pos + 6] << 16) |
                             (static_cast<std::uint32_t>(b[pos + 7]) << 24);
    if (std::equal(id, id + 4, b.begin() + static_cast<std::ptrdiff_t>(pos))) {
      *size = sz;
      return pos + 8;
    }
    pos += 8 + sz + (sz & 1);
  }
  FAIL("chunk not found");
  return 0;
}

}  // namespace

TEST_CASE("AudioBuffer rejects non-positive rates") {
  CHECK_THROWS_AS(AudioBuffer({0.0}, 0), InputError);
  CHECK_THROWS_AS(AudioBuffer({0.0}, -8000), InputError);
  AudioBuffer empty({}, 8000);
  CHECK(empty.empty());
  CHECK(empty.duration_seconds() == 0.0);
}

TEST_CASE("one second of 16 kHz silence reads as 16000 zeros") {
  TempDir dir("audio");
  write_wav(dir / "silence.wav", AudioBuffer(std::vector<double>(16000, 0.0), 16000),
            WavEncoding::kPcm16);
  const AudioBuffer b = read_wav(dir / "silence.wav");
  CHECK(b.sample_rate == 16000);
  REQUIRE(b.size() == 16000);
  CHECK(oracle::max_abs(b.samples) == 0.0);
}

TEST_CASE("stereo input is downmixed by the channel mean") {
  std::vector<float> frames;
  for (int i = 0; i < 100; ++i) {
    frames.push_back(1.0f);
    frames.push_back(0.0f);
  }
  const auto image = testing::wav_image(3, 2, 22050, 32, testing::float_bytes(frames));
  const AudioBuffer b = decode_wav(image);
  CHECK(b.sample_rate == 22050);
  REQUIRE(b.size() == 100);
  for (double s : b.samples) CHECK(s == 0.5);
}

TEST_CASE("pcm16 samples scale by 1/32768") {
  const auto image = testing::wav_image(1, 1, 8000, 16,
                                        testing::pcm16_bytes({-32768, 16384, 0, 32767}));
  const AudioBuffer b = decode_wav(image);
  REQUIRE(b.size() == 4);
  CHECK(b.samples[0] == -1.0);
  CHECK(b.samples[1] == 0.5);
  CHECK(b.samples[2] == 0.0);
  CHECK(b.samples[3] == 32767.0 / 32768.0);
}

TEST_CASE("float32 round trip is sample-identical") {
  TempDir dir("audio");
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const AudioBuffer in(float_representable(gen, 1 + gen() % 5000),
                         8000 + static_cast<int>(gen() % 40000));
    write_wav(dir / "x.wav", in, WavEncoding::kFloat32);
    const AudioBuffer out = read_wav(dir / "x.wav");
    CHECK(out.sample_rate == in.sample_rate);
    REQUIRE(out.size() == in.size());
    double dev = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) dev = std::max(dev, std::abs(in.samples[i] - out.samples[i]));
    CHECK(dev == 0.0);
  }
}

TEST_CASE("empty buffers round trip") {
  const AudioBuffer in({}, 16000);
  CHECK(decode_wav(encode_wav(in, WavEncoding::kFloat32)) == in);
  CHECK(decode_wav(encode_wav(in, WavEncoding::kPcm16)) == in);
}

TEST_CASE("pcm16 round trip is within half a quantization step") {
  std::mt19937_64 gen(5);
  const AudioBuffer in(oracle::random_vector(gen, 1000, -0.99, 0.99), 16000);
  const AudioBuffer out = decode_wav(encode_wav(in, WavEncoding::kPcm16));
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(std::abs(out.samples[i] - in.samples[i]) <= 0.5 / 32768.0 + 1e-15);
  }
}

TEST_CASE("all-zero pcm16 buffer produces an all-zero data chunk") {
  const auto bytes = encode_wav(AudioBuffer(std::vector<double>(321, 0.0), 16000),
                                WavEncoding::kPcm16);
  std::uint32_t size = 0;
  const std::size_t off = chunk_payload(bytes, "data", &size);
  CHECK(size == 642);
  for (std::size_t i = off; i < off + size; ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("pcm16 clamps out-of-range samples") {
  const auto bytes = encode_wav(AudioBuffer({2.0, -2.0, 1.0, -1.0}, 16000),
                                WavEncoding::kPcm16);
  std::uint32_t size = 0;
  const std::size_t off = chunk_payload(bytes, "data", &size);
  auto code = [&](std::size_t i) {
    return static_cast<std::int16_t>(bytes[off + 2 * i] | (bytes[off + 2 * i + 1] << 8));
  };
  CHECK(code(0) == 32767);
  CHECK(code(1) == -32768);
  CHECK(code(2) == 32767);
  CHECK(code(3) == -32768);
}

TEST_CASE("malformed headers name the offending chunk") {
  std::vector<unsigned char> junk = {'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  try {
    decode_wav(junk);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.chunk() == "RIFF");
  }

  auto image = testing::wav_image(1, 1, 8000, 16, testing::pcm16_bytes({1, 2}));
  image[16] = 8;  // fmt chunk size below 16
  try {
    decode_wav(image);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.chunk() == "fmt ");
  }

  std::vector<unsigned char> no_data;
  testing::put_tag(no_data, "RIFF");
  testing::put_u32(no_data, 4);
  testing::put_tag(no_data, "WAVE");
  CHECK_THROWS_AS(decode_wav(no_data), FormatError);
  CHECK_THROWS_AS(decode_wav(std::vector<unsigned char>{'R', 'I'}), FormatError);
}

TEST_CASE("unsupported encodings are reported as such") {
  // 24-bit integer PCM.
  const auto pcm24 = testing::wav_image(1, 1, 8000, 24, std::vector<unsigned char>(6, 0));
  CHECK_THROWS_AS(decode_wav(pcm24), UnsupportedEncodingError);
  // 64-bit float.
  const auto f64 = testing::wav_image(3, 1, 8000, 64, std::vector<unsigned char>(16, 0));
  CHECK_THROWS_AS(decode_wav(f64), UnsupportedEncodingError);
  // A-law.
  const auto alaw = testing::wav_image(6, 1, 8000, 8, std::vector<unsigned char>(4, 0));
  CHECK_THROWS_AS(decode_wav(alaw), UnsupportedEncodingError);
}

TEST_CASE("file errors") {
  TempDir dir("audio");
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), IoError);
  CHECK_THROWS_AS(write_wav(dir / "no" / "such" / "dir.wav", AudioBuffer({0.0}, 8000)),
                  IoError);
  testing::write_text(dir / "bad.wav", "definitely not a wav file");
  try {
    read_wav(dir / "bad.wav");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.chunk() == "RIFF");
    CHECK(std::string(e.what()).find("bad.wav") != std::string::npos);
  }
}

TEST_CASE("resample to the same rate is the identity") {
  std::mt19937_64 gen(3);
  const AudioBuffer in(oracle::random_vector(gen, 777), 22050);
  CHECK(resample(in, 22050) == in);
  CHECK_THROWS_AS(resample(in, 0), InputError);
}

TEST_CASE("resampling a 1 kHz sine keeps its RMS") {
  const AudioBuffer in = sine(1000.0, 1.0, 16000);
  const AudioBuffer out = resample(in, 8000);
  CHECK(out.sample_rate == 8000);
  CHECK(std::abs(static_cast<double>(out.size()) / 8000 - in.duration_seconds()) <= 1.0 / 8000);
  const double rms_in = std::sqrt(rms_power(in));
  const double rms_out = std::sqrt(rms_power(out));
  CHECK(std::abs(rms_out / rms_in - 1.0) < 0.01);
}

TEST_CASE("resampling preserves DC away from the edges") {
  const AudioBuffer in(std::vector<double>(8000, 0.3), 16000);
  for (int rate : {8000, 11025, 22050, 44100}) {
    const AudioBuffer out = resample(in, rate);
    const std::size_t margin = out.size() / 10;
    for (std::size_t i = margin; i + margin < out.size(); ++i) {
      CHECK(std::abs(out.samples[i] - 0.3) < 1e-3);
    }
  }
}

TEST_CASE("resample duration is preserved within one sample period") {
  for (int from : {8000, 16000, 22050, 44100, 48000}) {
    for (int to : {8000, 16000, 22050, 44100, 48000}) {
      const AudioBuffer in(std::vector<double>(12345, 0.1), from);
      const AudioBuffer out = resample(in, to);
      CHECK(std::abs(out.duration_seconds() - in.duration_seconds()) <= 1.0 / to + 1e-12);
    }
  }
}

TEST_CASE("up-then-down resampling preserves band-limited energy") {
  AudioBuffer x = sine(440.0, 1.0, 8000, 0.5);
  const AudioBuffer y = sine(1300.0, 1.0, 8000, 0.25);
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += y.samples[i];
  const AudioBuffer back = resample(resample(x, 16000), 8000);
  REQUIRE(back.size() == x.size());
  CHECK(std::abs(rms_power(back) / rms_power(x) - 1.0) < 0.01);
}

TEST_CASE("rms_power") {
  CHECK(rms_power(AudioBuffer(std::vector<double>(10, 0.0), 8000)) == 0.0);
  CHECK(rms_power(AudioBuffer(std::vector<double>(10, 0.5), 8000)) == 0.25);
  const AudioBuffer s = sine(100.0, 1.0, 16000);  // 100 periods
  CHECK(std::abs(rms_power(s) - 0.5) < 1e-3);
  CHECK_THROWS_AS(rms_power(AudioBuffer({}, 8000)), DomainError);
}

TEST_CASE("peak_normalize") {
  const AudioBuffer a = peak_normalize(AudioBuffer({0.5, -0.25}, 8000), 1.0);
  CHECK(a.samples == std::vector<double>{1.0, -0.5});

  const AudioBuffer zeros(std::vector<double>(5, 0.0), 8000);
  CHECK(peak_normalize(zeros, 0.9) == zeros);

  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const AudioBuffer x(oracle::random_vector(gen, 100 + trial * 37, -3.0, 3.0), 8000);
    const AudioBuffer y = peak_normalize(x, 0.9);
    CHECK(std::abs(oracle::max_abs(y.samples) - 0.9) <= 1e-9);
    const double expected = rms_power(x) * std::pow(0.9 / peak(x.samples), 2);
    CHECK(std::abs(rms_power(y) - expected) <= 1e-9);
  }
  CHECK_THROWS_AS(peak_normalize(a, 0.0), InputError);
  CHECK_THROWS_AS(peak_normalize(a, 1.5), InputError);
}
