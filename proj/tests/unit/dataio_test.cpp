#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "fastfix/dataio/cursor.hpp"
#include "fastfix/dataio/dataset.hpp"
#include "fastfix/dataio/split.hpp"
#include "fastfix/error.hpp"

namespace fastfix {
namespace {

namespace fs = std::filesystem;

Dataset small_synth(std::size_t n, std::uint64_t seed = 1) {
  SynthOptions o;
  o.seed = seed;
  o.count = n;
  o.height = 8;
  o.width = 8;
  return synth_generate(o, 7);
}

TEST(Synthetic, ValidBalancedAndDeterministic) {
  const auto a = small_synth(205);
  a.validate();
  EXPECT_EQ(a.size(), 205u);
  std::map<int, int> counts;
  for (int y : a.labels) ++counts[y];
  for (const auto& [c, k] : counts) EXPECT_EQ(k, c < 5 ? 21 : 20);
  EXPECT_EQ(small_synth(205), a);
  EXPECT_NE(small_synth(205, 2).images, a.images);
}

TEST(Synthetic, RoundTripThroughFileIsBitIdentical) {
  auto ds = small_synth(50);
  ds.name = "rt";
  const auto path = fs::temp_directory_path() / "fastfix_rt.ffds";
  write_dataset(path, ds);
  auto back = read_dataset(path);
  back.name = ds.name;
  EXPECT_EQ(back, ds);
  fs::remove(path);
}

TEST(Dataset, ReadRejectsBadMagic) {
  const auto path = fs::temp_directory_path() / "fastfix_bad.ffds";
  std::ofstream(path, std::ios::binary) << "XXXX0000";
  EXPECT_THROW(read_dataset(path), DataError);
  fs::remove(path);
}

TEST(Dataset, ValidateCatchesBrokenInvariants) {
  auto ds = small_synth(20);
  ds.labels[3] = 10;
  EXPECT_THROW(ds.validate(), DataError);
  ds = small_synth(20);
  ds.images[0] = 1.5f;
  EXPECT_THROW(ds.validate(), DataError);
  ds = small_synth(20);
  ds.images.pop_back();
  EXPECT_THROW(ds.validate(), DataError);
}

TEST(Dataset, ChannelStatsAndGather) {
  Dataset ds;
  ds.channels = 2;
  ds.height = 1;
  ds.width = 2;
  ds.class_count = 2;
  ds.images = {0.0f, 1.0f, 0.5f, 0.5f, 1.0f, 1.0f, 0.5f, 0.5f};
  ds.labels = {0, 1};
  const auto st = channel_stats(ds);
  EXPECT_FLOAT_EQ(st.mean[0], 0.75f);
  EXPECT_FLOAT_EQ(st.mean[1], 0.5f);
  const std::vector<std::size_t> idx{1};
  const auto t = gather_images(ds, idx);
  EXPECT_EQ(t.shape(), (Shape{1, 2, 1, 2}));
  EXPECT_FLOAT_EQ(t[0], 1.0f);
  EXPECT_EQ(gather_labels(ds, idx), std::vector<int>{1});
}

TEST(Cifar, ReadsRecordLayoutAndNamesMissingFiles) {
  const auto dir = fs::temp_directory_path() / "fastfix_cifar";
  fs::create_directories(dir);
  const auto write_batch = [&](std::size_t records) {
    std::ofstream out(dir / "test_batch.bin", std::ios::binary);
    for (std::size_t r = 0; r < records; ++r) {
      out.put(static_cast<char>(r % 2 == 0 ? 3 : 9));
      for (int p = 0; p < 3072; ++p) out.put(static_cast<char>(p < 1024 ? 255 : (p < 2048 ? 0 : 51)));
    }
  };
  write_batch(10000);
  const auto ds = load_cifar10_binary(dir, CifarSplit::test);
  ASSERT_EQ(ds.size(), 10000u);
  EXPECT_EQ(ds.labels[0], 3);
  EXPECT_EQ(ds.labels[1], 9);
  EXPECT_FLOAT_EQ(ds.image(1)[0], 1.0f);
  EXPECT_FLOAT_EQ(ds.image(1)[1024], 0.0f);
  EXPECT_FLOAT_EQ(ds.image(1)[2048], 0.2f);
  write_batch(2);
  EXPECT_THROW(load_cifar10_binary(dir, CifarSplit::test), DataError);
  try {
    load_cifar10_binary(dir, CifarSplit::train);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("data_batch_1.bin"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Split, ClassBalancedAndSorted) {
  const auto ds = small_synth(400);
  const auto s = make_ssl_split(ds, 40, 3);
  ASSERT_EQ(s.labeled.size(), 40u);
  std::map<int, int> per;
  for (auto i : s.labeled) ++per[ds.labels[i]];
  for (const auto& [c, k] : per) EXPECT_EQ(k, 4) << "class " << c;
  EXPECT_TRUE(std::is_sorted(s.labeled.begin(), s.labeled.end()));
  EXPECT_EQ(s.unlabeled.size(), 400u);
  EXPECT_EQ(s.distinct_count(), 400u);
  EXPECT_EQ(make_ssl_split(ds, 40, 3), s);
}

TEST(Split, ExclusiveModeUsesComplement) {
  const auto ds = small_synth(100);
  const auto s = make_ssl_split(ds, 20, 4, false);
  EXPECT_EQ(s.unlabeled.size(), 80u);
  std::set<std::size_t> all(s.labeled.begin(), s.labeled.end());
  for (auto i : s.unlabeled) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(s.distinct_count(), 100u);
}

TEST(Split, RejectsIndivisibleOrOversizedRequests) {
  const auto ds = small_synth(100);
  EXPECT_THROW(make_ssl_split(ds, 15, 0), DataError);
  EXPECT_THROW(make_ssl_split(ds, 110, 0), DataError);
}

TEST(Cursor, WrapsWithReshuffle) {
  BatchCursor c({0, 1, 2, 3, 4}, 9);
  const auto a = c.next(3);
  const auto b = c.next(3);
  std::vector<std::size_t> first5(a.begin(), a.end());
  first5.insert(first5.end(), b.begin(), b.begin() + 2);
  std::sort(first5.begin(), first5.end());
  EXPECT_EQ(first5, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(c.epoch(), 1u);
  EXPECT_TRUE(c.next(0).empty());
}

TEST(Cursor, EmptyPoolThrowsForPositiveDraw) {
  BatchCursor c({}, 1);
  EXPECT_TRUE(c.next(0).empty());
  EXPECT_THROW(c.next(1), Error);
}

// Brute force: over windows aligned to a reshuffle boundary, each index is
// drawn floor(window/len) or ceil(window/len) times.
TEST(Cursor, ExhaustiveOverAlignedWindows) {
  for (std::size_t len : {1u, 5u, 7u, 16u}) {
    for (std::size_t k : {1u, 3u, 4u, 10u}) {
      std::vector<std::size_t> pool(len);
      for (std::size_t i = 0; i < len; ++i) pool[i] = 100 + i;
      BatchCursor c(pool, len * 31 + k);
      const std::size_t calls = (len + k - 1) / k;
      std::map<std::size_t, std::size_t> seen;
      for (std::size_t i = 0; i < calls; ++i) {
        for (auto v : c.next(k)) ++seen[v];
      }
      const std::size_t window = calls * k;
      for (auto p : pool) {
        EXPECT_GE(seen[p], window / len);
        EXPECT_LE(seen[p], (window + len - 1) / len);
      }
      // A full pass sees each index exactly once before any repeat.
      BatchCursor d(pool, 77);
      std::set<std::size_t> once;
      for (auto v : d.next(len)) EXPECT_TRUE(once.insert(v).second);
    }
  }
}

}  // namespace
}  // namespace fastfix
