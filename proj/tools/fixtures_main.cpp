// Writes the synthetic speech corpus and the text steganogram.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "transteg/fixtures.hpp"

namespace fs = std::filesystem;
using namespace transteg;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: transteg_fixtures <out-dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  for (int i = 1; i <= fixtures::kSpeechFixtures; ++i) {
    audio::write_wav(fixtures::synth_speech(fixtures::speech_seed(i), fixtures::kSpeechSeconds),
                     dir / fixtures::speech_name(i));
  }
  std::ofstream text(dir / fixtures::kStegoTextName, std::ios::binary);
  text << fixtures::word_salad(0x7E57, fixtures::kStegoTextBytes);
  if (!text) {
    std::cerr << "cannot write " << (dir / fixtures::kStegoTextName) << "\n";
    return 1;
  }
  return 0;
}
