#pragma once

#include <cstdint>
#include <string>

#include "transteg/audio_io.hpp"

namespace transteg::fixtures {

inline constexpr int kSpeechFixtures = 7;
inline constexpr double kSpeechSeconds = 30.0;
inline constexpr std::size_t kStegoTextBytes = 2'100'000;
inline constexpr char kStegoTextName[] = "stego_text.txt";

/// speech_01.wav .. speech_07.wav
std::string speech_name(int index);
std::uint32_t speech_seed(int index);

/// Speech-like test signal: voiced syllables from a pulse-excited formant
/// filter, fricative noise bursts and pauses. Only raw engine outputs are
/// used, so the samples are the same on every standard library.
audio::PcmStream synth_speech(std::uint32_t seed, double seconds);

/// English-looking word salad of exactly `bytes` bytes.
std::string word_salad(std::uint64_t seed, std::size_t bytes);

}  // namespace transteg::fixtures
