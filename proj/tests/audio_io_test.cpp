/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <random>

#include "ssd/audio/resample.hpp"
#include "ssd/audio/wav.hpp"
#include "test_support.hpp"

using namespace ssd;
using namespace ssd::audio;
namespace st = ssd::testing;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ssd_audio_io_" + name);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ssd::Error";
  return ErrorKind::Numeric;
}

}  // namespace

TEST(LoadWav, SixteenBitFullScaleDivision) {
  const auto bytes = st::raw_wav(1, 1, 44100, 16, st::le_bytes<std::int16_t>({0, 16384, -32768}));
  const auto clip = decode_wav(bytes);
  ASSERT_EQ(clip.size(), 3u);
  EXPECT_EQ(clip.samples()[0], 0.0);
  EXPECT_EQ(clip.samples()[1], 0.5);
  EXPECT_EQ(clip.samples()[2], -1.0);
  EXPECT_EQ(clip.sample_rate_hz(), 44100);
  EXPECT_EQ(clip.source_bit_depth(), 16);
}

TEST(LoadWav, OneSecondAt44k) {
  const auto path = temp_path("one_second.wav");
  save_wav(AudioClip(st::sine(440.0, 0.3, 44100, 44100), 44100), path, 16);
  const auto clip = load_wav(path);
  EXPECT_EQ(clip.size(), 44100u);
  EXPECT_EQ(clip.sample_rate_hz(), 44100);
  std::filesystem::remove(path);
}

TEST(LoadWav, StereoIsAveraged) {
  std::vector<float> interleaved;
  for (int i = 0; i < 8; ++i) {
    interleaved.push_back(1.0f);
    interleaved.push_back(0.0f);
  }
  const auto clip = decode_wav(st::raw_wav(3, 2, 16000, 32, st::le_bytes(interleaved)));
  ASSERT_EQ(clip.size(), 8u);
  for (double s : clip.samples()) EXPECT_EQ(s, 0.5);
}

TEST(LoadWav, EightAndTwentyFourBit) {
  const auto eight = decode_wav(st::raw_wav(1, 1, 8000, 8, {128, 192, 0}));
  EXPECT_EQ(eight.samples(), (std::vector<double>{0.0, 0.5, -1.0}));
  // 24-bit: 0x400000 = 0.5, 0x800000 = -1.0
  const auto t24 = decode_wav(st::raw_wav(1, 1, 8000, 24, {0x00, 0x00, 0x40, 0x00, 0x00, 0x80}));
  EXPECT_EQ(t24.samples(), (std::vector<double>{0.5, -1.0}));
}

TEST(LoadWav, ErrorPaths) {
  EXPECT_EQ(kind_of([] { decode_wav(std::vector<std::uint8_t>{'R', 'I', 'F', 'X'}); }), ErrorKind::Decode);
  EXPECT_EQ(kind_of([] { decode_wav(st::raw_wav(2, 1, 8000, 4, {1, 2, 3, 4})); }), ErrorKind::UnsupportedFormat);
  EXPECT_EQ(kind_of([] { decode_wav(st::raw_wav(1, 3, 8000, 16, std::vector<std::uint8_t>(12, 0))); }),
            ErrorKind::UnsupportedFormat);
  EXPECT_EQ(kind_of([] { decode_wav(st::raw_wav(1, 1, 8000, 16, {})); }), ErrorKind::EmptyAudio);
  EXPECT_EQ(kind_of([] { load_wav(temp_path("does_not_exist.wav")); }), ErrorKind::Io);
}

TEST(LoadWav, FloatSamplesAreClampedAndMustBeFinite) {
  const auto loud = decode_wav(st::raw_wav(3, 1, 8000, 32, st::le_bytes<float>({1.5f, -2.0f, 0.25f})));
  EXPECT_EQ(loud.samples(), (std::vector<double>{1.0, -1.0, 0.25}));
  const float nan = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { decode_wav(st::raw_wav(3, 1, 8000, 32, st::le_bytes<float>({nan}))); }), ErrorKind::Decode);
}

TEST(SaveWav, SineRoundTripWithinQuantizationStep) {
  const AudioClip clip(st::sine(440.0, 0.9, 44100, 4410), 44100);
  for (int bits : {16, 32}) {
    const auto back = decode_wav(encode_wav(clip, bits));
    double worst = 0.0;
    for (std::size_t i = 0; i < clip.size(); ++i) worst = std::max(worst, std::abs(back.samples()[i] - clip.samples()[i]));
    EXPECT_LE(worst, std::ldexp(1.0, -(bits - 1))) << bits << "-bit";
  }
}

TEST(SaveWav, ContractErrors) {
  const AudioClip clip(std::vector<double>{0.1, 0.2}, 8000);
  EXPECT_EQ(kind_of([&] { encode_wav(clip, 12); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { encode_wav(AudioClip{}, 16); }), ErrorKind::Precondition);
  EXPECT_EQ(kind_of([&] { save_wav(clip, "/nonexistent-dir/x.wav", 16); }), ErrorKind::Io);
}

// Property: any valid clip survives save -> load within one quantisation step,
// including full-scale extremes.
TEST(SaveWav, RandomClipsRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 3000);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    for (double& v : x) v = amp(rng);
    x.front() = trial % 2 ? 1.0 : -1.0;
    const AudioClip clip(x, 44100);
    for (int bits : {16, 32}) {
      const auto back = decode_wav(encode_wav(clip, bits));
      ASSERT_EQ(back.size(), clip.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        ASSERT_LE(std::abs(back.samples()[i] - x[i]), std::ldexp(1.0, -(bits - 1)));
        ASSERT_TRUE(back.samples()[i] >= -1.0 && back.samples()[i] <= 1.0);
      }
    }
  }
}

TEST(Resample, IdentityWhenRatesMatch) {
  const AudioClip clip(st::sine(300.0, 0.5, 44100, 1000), 44100);
  EXPECT_EQ(resample(clip, 44100), clip);
}

TEST(Resample, LengthFollowsRateRatio) {
  const AudioClip clip(st::sine(300.0, 0.5, 22050, 1000), 22050);
  const auto up = resample(clip, 44100);
  EXPECT_NEAR(static_cast<double>(up.size()), 2000.0, 1.0);
  EXPECT_EQ(up.sample_rate_hz(), 44100);
  const AudioClip odd(st::sine(300.0, 0.5, 48000, 12345), 48000);
  EXPECT_NEAR(static_cast<double>(resample(odd, 44100).size()), std::round(12345.0 * 44100 / 48000), 1.0);
  EXPECT_THROW(resample(clip, 0), Error);
}

TEST(Resample, ToneKeepsItsFrequency) {
  const AudioClip clip(st::sine(440.0, 0.5, 48000, 48000), 48000);
  const auto out = resample(clip, 44100);
  const double peak = st::dominant_frequency(out.samples(), 44100, 300.0, 600.0, 0.5);
  EXPECT_NEAR(peak, 440.0, 44100.0 / 2048.0);
}

TEST(Resample, UpsampledToneAmplitudeIsPreserved) {
  const AudioClip clip(st::sine(1000.0, 0.5, 22050, 22050), 22050);
  const auto out = resample(clip, 44100);
  std::vector<double> middle(out.samples().begin() + 2000, out.samples().end() - 2000);
  EXPECT_NEAR(st::rms(middle), 0.5 / std::sqrt(2.0), 0.005);
}
