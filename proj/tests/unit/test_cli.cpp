// Copyright 2026 The fmixkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "cli/image_io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "fmix/mixing.hpp"
#include "fmix/npy.hpp"
#include "fmix/version.hpp"

namespace fmix::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fmix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::vector<std::string> listing() const {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir_)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }

  template <class T>
  void save(const std::string& name, const Tensor<T>& t) {
    std::ofstream out(path(name), std::ios::binary);
    npy::write(out, t);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(ParseDims, Accepts) {
  EXPECT_EQ(parse_dims("64"), (Shape{64}));
  EXPECT_EQ(parse_dims("32x16"), (Shape{32, 16}));
  EXPECT_EQ(parse_dims("4X5x6"), (Shape{4, 5, 6}));
}

TEST(ParseDims, Rejects) {
  for (const char* bad : {"", "x", "32x", "0x4", "3x3x3x3", "a", "-4", "4x4.5"})
    EXPECT_THROW(parse_dims(bad), UsageError) << bad;
}

TEST(SiblingPath, ReplacesExtension) {
  EXPECT_EQ(sibling_path("out/masks.npy", ".json"), fs::path("out/masks.json"));
  EXPECT_EQ(sibling_path("masks", ".json"), fs::path("masks.json"));
}

TEST_F(CliTest, GenMaskCountsAndSidecar) {
  ASSERT_EQ(run_cli({"gen-mask", "--dims", "32x32", "--count", "8", "--lambda", "0.5", "--delta", "3", "--seed", "1",
                     "--out", path("m.npy")}),
            kExitOk)
      << err_.str();
  const auto masks = npy::to_tensor<std::uint8_t>(npy::load(path("m.npy")));
  ASSERT_EQ(masks.shape(), (Shape{8, 32, 32}));
  for (std::size_t i = 0; i < 8; ++i) {
    const auto m = masks.slice(i);
    EXPECT_EQ(std::count(m.begin(), m.end(), std::uint8_t{1}), 512);
  }
  const auto meta = nlohmann::json::parse(slurp(path("m.json")));
  EXPECT_EQ(meta["seed"], 1);
  EXPECT_EQ(meta["family"], "fmix");
  EXPECT_EQ(meta["delta"], 3.0);
  EXPECT_EQ(meta["alpha"], 1.0);
  EXPECT_EQ(meta["lambdas"].size(), 8u);
  EXPECT_EQ(meta["version"], kVersion);
}

TEST_F(CliTest, GenMaskIsByteIdenticalAcrossRuns) {
  for (const char* name : {"a.npy", "b.npy"})
    ASSERT_EQ(run_cli({"gen-mask", "--dims", "16x16", "--count", "5", "--seed", "42", "--out", path(name)}), kExitOk);
  EXPECT_EQ(slurp(path("a.npy")), slurp(path("b.npy")));
  auto meta_a = slurp(path("a.json")), meta_b = slurp(path("b.json"));
  EXPECT_EQ(meta_a, meta_b);
}

TEST_F(CliTest, GenMaskReproducibleFromSidecar) {
  ASSERT_EQ(run_cli({"gen-mask", "--dims", "24", "--count", "3", "--alpha", "0.2", "--seed", "9", "--out",
                     path("m.npy")}),
            kExitOk);
  const auto meta = nlohmann::json::parse(slurp(path("m.json")));
  const auto masks = npy::to_tensor<std::uint8_t>(npy::load(path("m.npy")));
  MaskConfig config{meta["dims"].get<Shape>(), meta["alpha"].get<double>(), meta["delta"].get<double>()};
  for (std::size_t i = 0; i < 3; ++i) {
    Rng rng(meta["seed"].get<std::uint64_t>(), i);
    const auto g = generate_mask(rng, config);
    EXPECT_EQ(g.lambda, meta["lambdas"][i].get<double>());
    EXPECT_EQ(g.mask.data, masks.slice(i));
  }
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  ::setenv("FMIX_SEED", "1234", 1);
  ASSERT_EQ(run_cli({"gen-mask", "--dims", "8", "--out", path("env.npy")}), kExitOk);
  ::unsetenv("FMIX_SEED");
  ASSERT_EQ(run_cli({"gen-mask", "--dims", "8", "--seed", "1234", "--out", path("flag.npy")}), kExitOk);
  EXPECT_EQ(slurp(path("env.npy")), slurp(path("flag.npy")));
  EXPECT_EQ(nlohmann::json::parse(slurp(path("env.json")))["seed"], 1234);
  ::setenv("FMIX_SEED", "nope", 1);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8", "--out", path("bad.npy")}), kExitUsage);
  ::unsetenv("FMIX_SEED");
}

TEST_F(CliTest, GenMaskErrors) {
  EXPECT_EQ(run_cli({"gen-mask", "--family", "cutmix", "--dims", "32x32x3", "--out", path("c.npy")}), kExitUsage);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "0x3", "--out", path("c.npy")}), kExitUsage);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8", "--lambda", "1.5", "--out", path("c.npy")}), kExitValidation);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8", "--alpha", "-1", "--out", path("c.npy")}), kExitValidation);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8", "--format", "png", "--out", path("c.npy")}), kExitUsage);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8", "--out", path("missing/dir/c.npy")}), kExitIo);
  EXPECT_EQ(run_cli({"gen-mask", "--dims", "8"}), kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}), kExitUsage);
  EXPECT_TRUE(listing().empty());
}

TEST_F(CliTest, HelpExitsCleanly) {
  EXPECT_EQ(run_cli({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("gen-mask"), std::string::npos);
}

TEST_F(CliTest, CutmixMasks) {
  ASSERT_EQ(run_cli({"gen-mask", "--family", "cutmix", "--dims", "10x10", "--count", "4", "--lambda", "0.84", "--out",
                     path("c.npy")}),
            kExitOk);
  const auto masks = npy::to_tensor<std::uint8_t>(npy::load(path("c.npy")));
  for (std::size_t i = 0; i < 4; ++i) {
    const auto m = masks.slice(i);
    EXPECT_EQ(std::count(m.begin(), m.end(), std::uint8_t{0}), 16);
  }
}

TEST_F(CliTest, MixupWithLambdaOneCopiesFirstInput) {
  Rng rng(1);
  Tensor<float> a({3, 2, 5, 5}), b({3, 2, 5, 5});
  for (auto& v : a) v = static_cast<float>(rng.normal());
  for (auto& v : b) v = static_cast<float>(rng.normal());
  save("a.npy", a);
  save("b.npy", b);
  ASSERT_EQ(run_cli({"mix", "--family", "mixup", "--lambda", "1", "--a", path("a.npy"), "--b", path("b.npy"), "--out",
                     path("x.npy")}),
            kExitOk)
      << err_.str();
  const std::string a_bytes = slurp(path("a.npy"));
  const std::string x_bytes = slurp(path("x.npy"));
  EXPECT_EQ(x_bytes, a_bytes);
  EXPECT_FALSE(fs::exists(path("x.masks.npy")));
  EXPECT_EQ(nlohmann::json::parse(slurp(path("x.json")))["lambda"], 1.0);
}

TEST_F(CliTest, FmixMixSelectsFromOneParent) {
  Rng rng(2);
  Tensor<float> a({6, 3, 16, 16}), b({6, 3, 16, 16});
  for (auto& v : a) v = static_cast<float>(rng.normal());
  for (auto& v : b) v = static_cast<float>(rng.normal());
  save("a.npy", a);
  save("b.npy", b);
  ASSERT_EQ(run_cli({"mix", "--family", "fmix", "--lambda", "0.5", "--spatial-rank", "2", "--a", path("a.npy"), "--b",
                     path("b.npy"), "--out", path("x.npy"), "--seed", "5"}),
            kExitOk)
      << err_.str();
  const auto x = npy::to_tensor<float>(npy::load(path("x.npy")));
  const auto masks = npy::to_tensor<std::uint8_t>(npy::load(path("x.masks.npy")));
  ASSERT_EQ(masks.shape(), (Shape{6, 16, 16}));
  const std::size_t plane = 256;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t item = i / (3 * plane);
    const auto m = masks[item * plane + i % plane];
    ASSERT_EQ(x[i], m ? a[i] : b[i]);
  }
  for (std::size_t item = 0; item < 6; ++item) {
    const auto m = masks.slice(item);
    EXPECT_EQ(std::count(m.begin(), m.end(), std::uint8_t{1}), 128);
  }
}

TEST_F(CliTest, MixFailuresLeaveNoOutputs) {
  save("a.npy", Tensor<float>({2, 8, 8}));
  save("b.npy", Tensor<float>({2, 8, 9}));
  save("u.npy", Tensor<std::uint8_t>({2, 8, 8}));
  save("one.npy", Tensor<float>({2, 8}));
  EXPECT_EQ(run_cli({"mix", "--a", path("a.npy"), "--b", path("b.npy"), "--out", path("x.npy")}), kExitValidation);
  EXPECT_EQ(run_cli({"mix", "--a", path("a.npy"), "--b", path("u.npy"), "--out", path("x.npy")}), kExitValidation);
  EXPECT_EQ(run_cli({"mix", "--family", "mixup", "--a", path("u.npy"), "--b", path("u.npy"), "--out", path("x.npy")}),
            kExitValidation);
  EXPECT_EQ(run_cli({"mix", "--family", "cutmix", "--a", path("one.npy"), "--b", path("one.npy"), "--out",
                     path("x.npy")}),
            kExitValidation);
  EXPECT_EQ(run_cli({"mix", "--a", path("nope.npy"), "--b", path("a.npy"), "--out", path("x.npy")}), kExitIo);
  EXPECT_EQ(listing(), (std::vector<std::string>{"a.npy", "b.npy", "one.npy", "u.npy"}));
}

TEST_F(CliTest, UintMasksMixWithFmix) {
  save("a.npy", Tensor<std::uint8_t>({2, 8, 8}, 200));
  save("b.npy", Tensor<std::uint8_t>({2, 8, 8}, 7));
  ASSERT_EQ(run_cli({"mix", "--lambda", "0.25", "--a", path("a.npy"), "--b", path("b.npy"), "--out", path("x.npy")}),
            kExitOk);
  const auto x = npy::to_tensor<std::uint8_t>(npy::load(path("x.npy")));
  EXPECT_EQ(std::count(x.begin(), x.end(), std::uint8_t{200}), 32);
}

TEST_F(CliTest, StatsOnAllOnesMasks) {
  save("ones.npy", Tensor<std::uint8_t>({2, 4, 4}, 1));
  ASSERT_EQ(run_cli({"stats", "--in", path("ones.npy")}), kExitOk);
  EXPECT_EQ(out_.str(),
            "item,mean,ones_count,transition_fraction\n"
            "0,1,16,0\n"
            "1,1,16,0\n"
            "all,1,16,0\n");
  ASSERT_EQ(run_cli({"stats", "--in", path("ones.npy"), "--out", path("s.csv")}), kExitOk);
  EXPECT_EQ(slurp(path("s.csv")), "item,mean,ones_count,transition_fraction\n0,1,16,0\n1,1,16,0\nall,1,16,0\n");
}

TEST_F(CliTest, StatsNineSignificantDigits) {
  save("m.npy", Tensor<std::uint8_t>({1, 3}, std::vector<std::uint8_t>{1, 0, 0}));
  ASSERT_EQ(run_cli({"stats", "--in", path("m.npy")}), kExitOk);
  EXPECT_NE(out_.str().find("0,0.333333333,1,0.5\n"), std::string::npos) << out_.str();
}

TEST_F(CliTest, StatsRejectsMalformed) {
  save("bad.npy", Tensor<std::uint8_t>({2, 4}, 3));
  EXPECT_EQ(run_cli({"stats", "--in", path("bad.npy")}), kExitValidation);
  std::ofstream(path("junk.npy")) << "hello";
  EXPECT_EQ(run_cli({"stats", "--in", path("junk.npy")}), kExitIo);
}

TEST_F(CliTest, StatsLocalityAndSlope) {
  for (const char* delta : {"1", "3"})
    ASSERT_EQ(run_cli({"gen-mask", "--dims", "32x32", "--count", "200", "--lambda", "0.5", "--delta", delta, "--out",
                       path(std::string("d") + delta + ".npy")}),
              kExitOk);
  auto aggregate_tf = [&](const char* file) {
    EXPECT_EQ(run_cli({"stats", "--in", path(file)}), kExitOk);
    const std::string csv = out_.str();
    const std::string last = csv.substr(csv.rfind("all,"));
    return std::stod(last.substr(last.rfind(',') + 1));
  };
  EXPECT_LT(aggregate_tf("d3.npy"), aggregate_tf("d1.npy"));

  ASSERT_EQ(run_cli({"gen-mask", "--dims", "64x64", "--count", "100", "--grey", "--delta", "3", "--out",
                     path("g.npy")}),
            kExitOk);
  ASSERT_EQ(run_cli({"stats", "--in", path("g.npy")}), kExitOk);
  const std::string csv = out_.str();
  EXPECT_EQ(csv.rfind("item,mean,spectral_slope,power_0,", 0), 0u);
  const std::string last = csv.substr(csv.rfind("all,"));
  const double slope = std::stod(last.substr(last.find(',', 4) + 1));
  EXPECT_NEAR(slope, -6.0, 0.5);
}

TEST_F(CliTest, VisualizePgm) {
  Tensor<std::uint8_t> mask({32, 32}, 0);
  for (std::size_t i = 0; i < 512; ++i) mask[i * 2] = 1;
  save("m.npy", mask);
  ASSERT_EQ(run_cli({"visualize", "--in", path("m.npy"), "--out", path("m.pgm")}), kExitOk);
  const std::string pgm = slurp(path("m.pgm"));
  const std::string header = "P5\n32 32\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  ASSERT_EQ(pgm.size(), header.size() + 1024);
  EXPECT_EQ(std::count(pgm.begin() + static_cast<std::ptrdiff_t>(header.size()), pgm.end(), '\xff'), 512);

  save("z.npy", Tensor<std::uint8_t>({32, 32}, 0));
  ASSERT_EQ(run_cli({"visualize", "--in", path("z.npy"), "--out", path("z.pgm")}), kExitOk);
  const std::string zero = slurp(path("z.pgm"));
  EXPECT_EQ(zero, header + std::string(1024, '\0'));
}

TEST_F(CliTest, VisualizeScalesImagesAndStacks) {
  save("f.npy", Tensor<float>({2, 1, 3}, std::vector<float>{-1, 0, 1, 5, 5, 5}));
  ASSERT_EQ(run_cli({"visualize", "--in", path("f.npy"), "--out", path("f.pgm")}), kExitOk);
  EXPECT_EQ(slurp(path("f_000.pgm")), std::string("P5\n3 1\n255\n") + '\0' + '\x80' + '\xff');
  EXPECT_EQ(slurp(path("f_001.pgm")), std::string("P5\n3 1\n255\n") + std::string(3, '\0'));
}

TEST_F(CliTest, VisualizeRejectsNon2D) {
  save("v.npy", Tensor<std::uint8_t>({64}, 1));
  EXPECT_EQ(run_cli({"visualize", "--in", path("v.npy"), "--out", path("v.pgm")}), kExitUsage);
  save("w.npy", Tensor<std::uint8_t>({2, 2, 2, 2}, 1));
  EXPECT_EQ(run_cli({"visualize", "--in", path("w.npy"), "--out", path("w.pgm")}), kExitUsage);
  EXPECT_EQ(run_cli({"visualize", "--in", path("v.npy"), "--out", path("v.npy"), "--format", "npy"}), kExitUsage);
}

TEST(Png, StructureAndChecksums) {
  const std::vector<std::uint8_t> pixels{0, 255, 128, 7, 1, 2};
  const std::string png = encode_png(pixels, 3, 2);
  ASSERT_EQ(png.substr(0, 8), std::string("\x89PNG\r\n\x1a\n", 8));
  EXPECT_EQ(png.substr(12, 4), "IHDR");
  // width 3, height 2, depth 8, greyscale
  EXPECT_EQ(png.substr(16, 13), std::string("\0\0\0\x03\0\0\0\x02\x08\0\0\0\0", 13));
  EXPECT_EQ(png.substr(png.size() - 12), std::string("\0\0\0\0IEND\xae\x42\x60\x82", 12));
}

}  // namespace
}  // namespace fmix::cli
