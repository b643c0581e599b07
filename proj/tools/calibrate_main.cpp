// Runs the warden calibration on the speech fixtures and writes the policy.
#include <fstream>
#include <iostream>
#include <iterator>

#include <CLI11.hpp>

#include "transteg/calibration.hpp"
#include "transteg/error.hpp"
#include "transteg/fixtures.hpp"

using namespace transteg;

int main(int argc, char** argv) {
  CLI::App app{"warden threshold calibration"};
  std::string fixture_dir, out, metric = "total-variation";
  app.add_option("--fixtures", fixture_dir, "directory with speech_NN.wav and stego_text.txt")->required();
  app.add_option("--out", out, "policy file to write")->required();
  app.add_option("--metric", metric);
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<audio::PcmStream> voices;
    std::vector<std::string> names;
    for (int i = 1; i <= fixtures::kSpeechFixtures; ++i) {
      names.push_back(fixtures::speech_name(i));
      voices.push_back(audio::read_wav(std::filesystem::path(fixture_dir) / names.back()));
    }
    std::ifstream in(std::filesystem::path(fixture_dir) / fixtures::kStegoTextName, std::ios::binary);
    if (!in) throw Error(ErrorKind::input, "cannot read stego text");
    const Bytes text(std::istreambuf_iterator<char>(in), {});

    const calib::Calibration cal =
        calib::calibrate(voices, names, text, warden::metric_from_name(metric));
    for (const auto& m : cal.fixtures) {
      std::cout << m.fixture << " cc=" << m.clean_vs_clean << " raw=" << m.clean_vs_raw
                << " deflate=" << m.clean_vs_deflate << " 12=" << m.min_format_12
                << " 23=" << m.min_format_23 << " 13=" << m.max_artifact_13 << "\n";
    }
    std::cout << "min raw/deflate ratio " << cal.min_raw_deflate_ratio << "\n";
    std::cout << warden::format_policy(cal.policy);
    warden::save_policy(cal.policy, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
