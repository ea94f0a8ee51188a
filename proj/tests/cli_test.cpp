// Copyright (c) the lowlight Authors
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

// Drives the installed CLI binary end to end through std::system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "lowlight/image.hpp"
#include "lowlight/image_io.hpp"
#include "test_support.hpp"

using namespace lowlight;
using namespace lltest;

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  static TempDir capture("clicap");
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_file = capture.file("out" + tag);
  const std::string err_file = capture.file("err" + tag);
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += std::string("\"") + LOWLIGHT_CLI_PATH + "\" " + args + " >" +
         out_file + " 2>" + err_file;
  const int rc = std::system(cmd.c_str());
  CliRun r;
  REQUIRE(WIFEXITED(rc));
  r.exit_code = WEXITSTATUS(rc);
  r.out = read_file(out_file);
  r.err = read_file(err_file);
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

// Keys must appear left to right in the given order.
void check_key_order(const std::string& line,
                     const std::vector<std::string>& keys) {
  size_t pos = 0;
  for (const std::string& k : keys) {
    const size_t found = line.find("\"" + k + "\":");
    REQUIRE(found != std::string::npos);
    CHECK(found >= pos);
    pos = found;
  }
}

double json_number(const std::string& line, const std::string& key) {
  const std::string tag = "\"" + key + "\":";
  const size_t p = line.find(tag);
  REQUIRE(p != std::string::npos);
  return std::stod(line.substr(p + tag.size()));
}

RgbImage dark_input(int w, int h, uint32_t variant) {
  RgbImage img = natural_image(w, h, variant);
  for (auto* p : {&img.r, &img.g, &img.b}) {
    for (float& v : p->data) v *= 0.35f;
  }
  return img;
}

}  // namespace

TEST_CASE("a single file is enhanced and reported on one line") {
  const TempDir dir("clibasic");
  const std::string in = dir.file("scene.png");
  save_image(dark_input(32, 32, 1), in);
  const std::string out_dir = dir.file("out");

  const CliRun r =
      run_cli(in + " --out " + out_dir + " --no-denoise");
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());
  REQUIRE(count_lines(r.out) == 1);
  check_key_order(r.out, {"file", "output", "threshold", "sigma",
                          "identity_fallback", "mean_luma", "std_luma",
                          "sigma_estimate"});
  CHECK(json_number(r.out, "threshold") > 0.0);
  CHECK(json_number(r.out, "sigma") == 0.0);  // denoising switched off
  CHECK(r.out.find("\"identity_fallback\":0") != std::string::npos);
  CHECK(json_number(r.out, "mean_luma") > 0.0);

  const std::string produced = dir.file("out/scene.enhanced.png");
  REQUIRE(fs::exists(produced));
  const RgbImage round = load_image(produced);
  CHECK(round.r.width == 32);
  CHECK(round.r.height == 32);
}

TEST_CASE("an explicit sigma reaches the denoiser") {
  const TempDir dir("clisigma");
  const std::string in = dir.file("scene.png");
  save_image(dark_input(24, 24, 2), in);
  const CliRun r =
      run_cli(in + " --out " + dir.file("o") + " --sigma=0.05");
  CHECK(r.exit_code == 0);
  CHECK(json_number(r.out, "sigma") == 0.05);
}

TEST_CASE("a failing file does not abort the batch") {
  const TempDir dir("cliiso");
  const std::string good = dir.file("good.png");
  save_image(dark_input(24, 24, 3), good);
  const std::string missing = dir.file("missing.png");

  const CliRun r =
      run_cli(missing + " " + good + " --out " + dir.file("o") +
              " --no-denoise");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("missing.png") != std::string::npos);
  REQUIRE(count_lines(r.out) == 1);  // the good file still went through
  CHECK(r.out.find("good.png") != std::string::npos);
  CHECK(fs::exists(dir.file("o/good.enhanced.png")));
}

TEST_CASE("keep-intermediates writes the decomposition artifacts") {
  const TempDir dir("cliinter");
  const std::string in = dir.file("shot.png");
  save_image(dark_input(24, 24, 4), in);
  const CliRun r = run_cli(in + " --out " + dir.file("o") +
                           " --no-denoise --keep-intermediates");
  CHECK(r.exit_code == 0);
  for (const char* name : {"shot.enhanced.png", "shot.illum.png",
                           "shot.refl.png", "shot.illum-enh.png",
                           "shot.curve.csv"}) {
    CHECK(fs::exists(dir.file(std::string("o/") + name)));
  }
}

TEST_CASE("compare mode scores the pipeline against the baseline") {
  const TempDir dir("clicmp");
  const std::string ref = dir.file("clean.png");
  save_image(natural_image(64, 64, 2), ref);
  const std::string out_dir = dir.file("o");

  // input == reference: the tool degrades it internally (seeded)
  const CliRun r =
      run_cli(ref + " --compare --reference " + ref + " --out " + out_dir);
  CHECK(r.exit_code == 0);
  REQUIRE(count_lines(r.out) == 1);
  check_key_order(r.out,
                  {"file", "output", "baseline_output", "psnr_input",
                   "ssim_input", "psnr_full", "ssim_full", "psnr_baseline",
                   "ssim_baseline", "sigma_full", "sigma_baseline"});
  CHECK(json_number(r.out, "psnr_full") > json_number(r.out, "psnr_baseline"));
  CHECK(json_number(r.out, "ssim_full") > json_number(r.out, "ssim_baseline"));
  CHECK(json_number(r.out, "sigma_full") <
        json_number(r.out, "sigma_baseline"));
  CHECK(json_number(r.out, "psnr_input") < json_number(r.out, "psnr_full"));
  CHECK(fs::exists(dir.file("o/clean.enhanced.png")));
  CHECK(fs::exists(dir.file("o/clean.agcwd.png")));
}

TEST_CASE("usage errors exit with code 2 and name the flag") {
  const TempDir dir("cliusage");
  const std::string in = dir.file("x.png");
  save_image(dark_input(16, 16, 5), in);

  struct Case {
    const char* args;
    const char* needle;
  };
  for (const Case c : {Case{" --percentile=0", "--percentile"},
                       Case{" --percentile=100", "--percentile"},
                       Case{" --alpha=0", "--alpha"},
                       Case{" --alpha=1.5", "--alpha"},
                       Case{" --lambda=0", "--lambda"},
                       Case{" --sigma=-0.5", "--sigma"},
                       Case{" --sigma=oops", "--sigma"},
                       Case{" --compare", "--reference"}}) {
    const CliRun r = run_cli(in + c.args);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find(c.needle) != std::string::npos);
  }

  // parser-level failures are nonzero too
  CHECK(run_cli("--no-denoise").exit_code != 0);      // no inputs
  CHECK(run_cli(in + " --bogus").exit_code != 0);     // unknown flag
}

TEST_CASE("repeated runs produce identical bytes regardless of threads") {
  const TempDir dir("clidet");
  const std::string in = dir.file("scene.png");
  save_image(dark_input(32, 32, 6), in);

  const CliRun a = run_cli(in + " --out " + dir.file("a"),
                           "OMP_NUM_THREADS=1");
  const CliRun b = run_cli(in + " --out " + dir.file("b"),
                           "OMP_NUM_THREADS=3");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const std::string pa = read_file(dir.file("a/scene.enhanced.png"));
  const std::string pb = read_file(dir.file("b/scene.enhanced.png"));
  CHECK(pa.size() > 0);
  CHECK(pa == pb);
}

TEST_CASE("directories expand to their image files in sorted order") {
  const TempDir dir("clidir");
  const std::string batch = dir.file("batch");
  fs::create_directories(batch);
  save_image(dark_input(16, 16, 7), batch + "/c.png");
  save_image(dark_input(16, 16, 8), batch + "/a.png");
  // small binary ppm, written by hand
  write_file(batch + "/b.ppm",
             std::string("P6\n2 2\n255\n") +
                 std::string("\x20\x30\x40\x50\x60\x70"
                             "\x11\x22\x33\x44\x55\x66",
                             12));
  write_file(batch + "/notes.txt", "skipped, not an image\n");

  const CliRun r =
      run_cli(batch + " --out " + dir.file("o") + " --no-denoise");
  CHECK(r.exit_code == 0);
  REQUIRE(count_lines(r.out) == 3);
  const size_t pa = r.out.find("a.png");
  const size_t pb = r.out.find("b.ppm");
  const size_t pc = r.out.find("c.png");
  REQUIRE(pa != std::string::npos);
  REQUIRE(pb != std::string::npos);
  REQUIRE(pc != std::string::npos);
  CHECK(pa < pb);
  CHECK(pb < pc);
  CHECK(r.out.find("notes.txt") == std::string::npos);
}
