#include "transteg/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string_view>

namespace transteg::fixtures {

std::string speech_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "speech_%02d.wav", index);
  return buf;
}

std::uint32_t speech_seed(int index) { return 0x5EED0000u + static_cast<std::uint32_t>(index); }

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform in [0,1) from raw 32-bit draws.
double unit(std::mt19937& rng) { return static_cast<double>(rng()) / 4294967296.0; }
double between(std::mt19937& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

struct Resonator {
  double a1 = 0, a2 = 0, gain = 0, y1 = 0, y2 = 0;

  void tune(double freq, double bw) {
    const double r = std::exp(-kPi * bw / audio::kSampleRate);
    a1 = 2.0 * r * std::cos(2.0 * kPi * freq / audio::kSampleRate);
    a2 = -r * r;
    gain = 1.0 - r;
  }
  double step(double x) {
    const double y = gain * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

// F1..F3 in Hz for a handful of vowels.
constexpr std::array<std::array<double, 3>, 8> kVowels{{
    {730, 1090, 2440}, {270, 2290, 3010}, {530, 1840, 2480}, {660, 1720, 2410},
    {570, 840, 2410},  {300, 870, 2240},  {440, 1020, 2240}, {490, 1350, 1690},
}};

}  // namespace

audio::PcmStream synth_speech(std::uint32_t seed, double seconds) {
  std::mt19937 rng(seed);
  const std::size_t total = static_cast<std::size_t>(seconds * audio::kSampleRate);
  std::vector<double> out;
  out.reserve(total);

  const double base_f0 = between(rng, 95.0, 210.0);
  std::array<Resonator, 3> vt;
  Resonator fric;
  double phase = 0.0;

  while (out.size() < total) {
    const double u = unit(rng);
    if (u < 0.18) {
      // pause with faint room noise
      const std::size_t n = static_cast<std::size_t>(between(rng, 0.06, 0.35) * audio::kSampleRate);
      for (std::size_t i = 0; i < n; ++i) out.push_back((unit(rng) - 0.5) * 40.0);
    } else if (u < 0.38) {
      // fricative
      const std::size_t n = static_cast<std::size_t>(between(rng, 0.04, 0.14) * audio::kSampleRate);
      fric.tune(between(rng, 2500.0, 3600.0), between(rng, 400.0, 900.0));
      const double amp = between(rng, 1500.0, 5000.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double env = std::sin(kPi * static_cast<double>(i) / static_cast<double>(n));
        out.push_back(fric.step((unit(rng) - 0.5) * amp * 6.0) * env);
      }
    } else {
      // voiced syllable, gliding between two vowels
      const std::size_t n = static_cast<std::size_t>(between(rng, 0.09, 0.28) * audio::kSampleRate);
      const auto& va = kVowels[rng() % kVowels.size()];
      const auto& vb = kVowels[rng() % kVowels.size()];
      const double f0a = base_f0 * between(rng, 0.85, 1.2);
      const double f0b = base_f0 * between(rng, 0.8, 1.15);
      const double amp = between(rng, 6000.0, 16000.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        if (i % 40 == 0) {
          for (int k = 0; k < 3; ++k) {
            vt[k].tune(va[k] + (vb[k] - va[k]) * t, 60.0 + 40.0 * k);
          }
        }
        const double f0 = f0a + (f0b - f0a) * t;
        phase += f0 / audio::kSampleRate;
        double excitation = 0.0;
        if (phase >= 1.0) {
          phase -= 1.0;
          excitation = 1.0;
        }
        excitation += (unit(rng) - 0.5) * 0.02;
        const double s = vt[0].step(excitation) * 1.0 + vt[1].step(excitation) * 0.6 +
                         vt[2].step(excitation) * 0.3;
        const double env = std::min(1.0, std::min(t * 8.0, (1.0 - t) * 5.0));
        out.push_back(s * amp * env * 4.0);
      }
    }
  }
  out.resize(total);

  audio::PcmStream pcm;
  pcm.samples.reserve(total);
  for (double v : out) {
    pcm.samples.push_back(static_cast<std::int16_t>(std::clamp(std::lround(v), -32768L, 32767L)));
  }
  return pcm;
}

namespace {

constexpr std::string_view kWords[] = {
    "the", "of", "and", "to", "in", "a", "is", "that", "for", "it", "as", "was", "with",
    "be", "by", "on", "not", "he", "this", "are", "or", "his", "from", "at", "which",
    "but", "have", "an", "had", "they", "you", "were", "their", "one", "all", "we",
    "can", "her", "has", "there", "been", "if", "more", "when", "will", "would", "who",
    "so", "no", "network", "packet", "voice", "call", "signal", "message", "hidden",
    "traffic", "between", "under", "through", "again", "morning", "evening", "river",
    "letter", "station", "number", "people", "public", "system", "because", "another",
    "before", "during", "without", "against", "however", "something", "nothing",
    "quickly", "slowly", "always", "never", "often", "small", "large", "early", "late",
    "good", "new", "old", "long", "great", "little", "own", "other", "right", "high",
    "house", "world", "country", "water", "question", "school", "state", "family",
    "government", "company", "program", "service", "market", "office", "window",
    "said", "made", "found", "thought", "told", "became", "left", "felt", "brought",
    "began", "kept", "held", "stood", "heard", "meant", "moved", "turned", "answered",
    "remembered", "followed", "carried", "listened", "waited", "opened", "closed",
};

}  // namespace

std::string word_salad(std::uint64_t seed, std::size_t bytes) {
  std::mt19937_64 rng(seed);
  std::string out;
  out.reserve(bytes + 64);
  std::size_t sentence_words = 0;
  std::size_t sentence_len = 0;
  std::size_t sentences_in_paragraph = 0;
  bool capital = true;
  while (out.size() < bytes) {
    if (sentence_words == 0) sentence_len = 4 + rng() % 14;
    std::string word(kWords[rng() % std::size(kWords)]);
    if (capital) {
      word[0] = static_cast<char>(word[0] - 'a' + 'A');
      capital = false;
    }
    out += word;
    ++sentence_words;
    if (sentence_words == sentence_len) {
      const auto r = rng() % 10;
      out += r < 7 ? "." : r < 9 ? "," : "?";
      if (out.back() == ',') {
        sentence_len += 3 + rng() % 6;
        out += ' ';
        continue;
      }
      sentence_words = 0;
      capital = true;
      if (++sentences_in_paragraph >= 3 + rng() % 5) {
        out += "\n\n";
        sentences_in_paragraph = 0;
      } else {
        out += ' ';
      }
    } else {
      out += rng() % 12 == 0 ? ", " : " ";
    }
  }
  out.resize(bytes);
  return out;
}

}  // namespace transteg::fixtures
