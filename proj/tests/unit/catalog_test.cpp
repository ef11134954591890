#include <doctest.h>

#include <string>

#include "fable/catalog.hpp"
#include "fable/error.hpp"
#include "fable/sha256.hpp"
#include "support/builders.hpp"
#include "support/temp_dir.hpp"

using namespace fable;
using namespace fable::prompt;
using fable::testing::TempDir;
using fable::testing::make_catalog;

TEST_CASE("starter catalog loads with eight values per slot") {
  const auto catalog = load_catalog(FABLE_STARTER_CATALOG);
  for (const auto size : catalog.sizes()) CHECK(size == 8);
  CHECK(to_string(space_size(catalog)) == "262144");
}

TEST_CASE("space size is the exact product of the six list sizes") {
  CHECK(to_string(space_size(make_catalog({100, 100, 100, 100, 100, 100}))) == "1000000000000");
  CHECK(to_string(space_size(make_catalog({2, 2, 2, 2, 2, 2}))) == "64");
  CHECK(to_string(space_size(make_catalog({1, 1, 1, 1, 1, 2}))) == "2");
  CHECK(to_string(space_size(make_catalog({7, 5, 3, 2, 2, 2}))) == "840");
}

TEST_CASE("space size survives values past 64 bits") {
  // 100000^6 = 10^30 overflows uint64 but not the 128-bit product.
  SlotCatalog catalog;
  for (int s = 0; s < kSlotCount; ++s) {
    auto& list = catalog.list(static_cast<Slot>(s));
    for (int i = 0; i < 100000; ++i) list.push_back("v" + std::to_string(i));
  }
  CHECK(to_string(space_size(catalog)) == "1000000000000000000000000000000");
}

TEST_CASE("missing list is rejected by name") {
  TempDir dir;
  const auto path = dir.file("cat.json", R"({
    "characters": ["fox"], "traits": ["sly"], "settings": ["forest"],
    "conflicts": ["a quarrel"], "resolutions": ["a truce"]
  })");
  CHECK_THROWS_WITH_AS(load_catalog(path), doctest::Contains("morals"), Error);
  try {
    load_catalog(path);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_list);
  }
}

TEST_CASE("blank and whitespace-only entries are rejected") {
  auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  catalog.settings[1] = "   ";
  try {
    validate_catalog(catalog);
    FAIL("expected EmptyEntry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_entry);
    CHECK(std::string(e.what()).find("settings") != std::string::npos);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("duplicate entries within a list are rejected") {
  auto catalog = make_catalog({3, 2, 2, 2, 2, 2});
  catalog.characters[2] = catalog.characters[0];
  try {
    validate_catalog(catalog);
    FAIL("expected DuplicateEntry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate_entry);
    CHECK(std::string(e.what()).find("characters") != std::string::npos);
  }
}

TEST_CASE("the same value may appear in different lists") {
  auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  catalog.traits[0] = "shared";
  catalog.settings[0] = "shared";
  CHECK_NOTHROW(validate_catalog(catalog));
}

TEST_CASE("unreadable or malformed catalog files raise IoError") {
  TempDir dir;
  try {
    load_catalog(dir.path / "absent.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
  const auto bad = dir.file("bad.json", "{not json");
  try {
    load_catalog(bad);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
  const auto arr = dir.file("arr.json", "[1,2,3]");
  CHECK_THROWS_AS(load_catalog(arr), Error);
}

TEST_CASE("check_tuple validates every slot index") {
  const auto catalog = make_catalog({2, 2, 2, 2, 2, 2});
  SlotTuple tuple;
  CHECK_NOTHROW(check_tuple(catalog, tuple));
  tuple[Slot::moral] = 2;
  try {
    check_tuple(catalog, tuple);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::index_out_of_range);
  }
  tuple[Slot::moral] = -1;
  CHECK_THROWS_AS(check_tuple(catalog, tuple), Error);
}

TEST_CASE("sha256 matches the published test vector") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
