#include <gtest/gtest.h>

#include <filesystem>

#include "ecggan/config.hpp"
#include "ecggan/error.hpp"
#include "ecggan/io.hpp"

using namespace ecggan;

TEST(ConfigMap, ParsesCommentsAndOverrides) {
  const ConfigMap m = ConfigMap::parse("# comment\n\n a.b = 1.5 \nname = hello world\na.b = 2\n");
  EXPECT_EQ(m.get_double("a.b", 0.0), 2.0);
  EXPECT_EQ(m.get_string("name", ""), "hello world");
  EXPECT_EQ(m.get_int("missing", 7), 7);
  EXPECT_TRUE(m.has("name"));
  EXPECT_FALSE(m.has("nam"));
}

TEST(ConfigMap, TypedAccessErrors) {
  const ConfigMap m = ConfigMap::parse("x = abc\ny = 1.5\nflag = yes\n");
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Format;
  };
  EXPECT_EQ(code_of([&] { m.get_double("x", 0.0); }), ErrorCode::Config);
  EXPECT_EQ(code_of([&] { m.get_int("y", 0); }), ErrorCode::Config);
  EXPECT_EQ(code_of([&] { m.get_bool("flag", false); }), ErrorCode::Config);
  EXPECT_EQ(code_of([] { ConfigMap::parse("no equals sign\n"); }), ErrorCode::Config);
}

TEST(ConfigMap, Booleans) {
  const ConfigMap m = ConfigMap::parse("a = true\nb = 0\n");
  EXPECT_TRUE(m.get_bool("a", false));
  EXPECT_FALSE(m.get_bool("b", true));
}

TEST(ConfigMap, MergeAndTextRoundTrip) {
  ConfigMap base = ConfigMap::parse("k1 = 1\nk2 = 2\n");
  base.merge(ConfigMap::parse("k2 = 20\nk3 = 3\n"));
  EXPECT_EQ(base.to_text(), "k1 = 1\nk2 = 20\nk3 = 3\n");
  EXPECT_EQ(ConfigMap::parse(base.to_text()).entries(), base.entries());
}

TEST(ConfigMap, RequireKnownNamesStrays) {
  const ConfigMap m = ConfigMap::parse("good = 1\nbad = 2\n");
  EXPECT_NO_THROW(m.require_known({"good", "bad"}));
  try {
    m.require_known({"good"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

TEST(ConfigMap, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "ecggan_test_config.cfg";
  write_file_atomic(path, "epochs = 12\n");
  EXPECT_EQ(ConfigMap::load(path).get_int("epochs", 0), 12);
  std::filesystem::remove(path);
  EXPECT_THROW(ConfigMap::load(path), Error);
}
