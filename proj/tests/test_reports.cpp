#include <string>

#include "bdisk/reports.hpp"
#include "json.hpp"
#include "doctest.h"

using namespace bdisk;

TEST_CASE("report bands gate pass()") {
  Report r;
  r.name = "toy";
  r.param("alpha", 1.5);
  r.add("unchecked", 42.0);
  r.add_band("inside", 0.5, 0.0, 1.0);
  CHECK(r.pass());
  r.add_band("outside", 2.0, 0.0, 1.0);
  CHECK_FALSE(r.pass());
  CHECK(r.items.size() == 3);
  CHECK_FALSE(r.items[0].checked);
  CHECK(r.items[1].pass);
  CHECK_FALSE(r.items[2].pass);
}

TEST_CASE("report serializations are well-formed") {
  Report r;
  r.name = "toy";
  r.param("n", std::uint64_t{64});
  r.add_band("x", 0.5, 0.0, 1.0);
  r.raw.push_back({0.25, 1.5});
  r.raw.push_back({0.5, 3.0});

  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("name") == "toy");
  CHECK(j.at("items").size() == 1);
  CHECK(j.at("items")[0].at("value").get<double>() == 0.5);

  const std::string text = r.to_text();
  CHECK(text.find("toy") != std::string::npos);
  CHECK(text.find('x') != std::string::npos);

  const std::string csv = r.raw_csv();
  CHECK(csv.rfind("scale,value", 0) == 0);
  CHECK(csv.find("0.25") != std::string::npos);
}

TEST_CASE("flat ratio report passes and reproduces bit for bit") {
  FlatParams p;
  p.m = 64;
  const Report a = flat_ratio_report(p);
  const Report b = flat_ratio_report(p);
  CHECK(a.pass());
  CHECK(a.to_json() == b.to_json());
  bool saw_ratio = false;
  for (const auto& item : a.items)
    if (item.name.find("ratio") != std::string::npos) {
      saw_ratio = true;
      CHECK(item.checked);
      CHECK(item.pass);
    }
  CHECK(saw_ratio);
}

TEST_CASE("self-glue report runs on a reduced ensemble") {
  SelfGlueParams p;
  p.replicas = 2;
  p.n = 512;
  const Report r = self_glue_report(p);
  CHECK(!r.items.empty());
  CHECK(!r.raw.empty());
  const Report again = self_glue_report(p);
  CHECK(r.to_json() == again.to_json());
}

TEST_CASE("grid consistency report emits the ks verdict") {
  GridConsistencyParams p;
  p.replicas = 12;
  p.n_coarse = 256;
  p.n_fine = 512;
  const Report r = grid_consistency_report(p);
  bool saw_ks = false, saw_shift = false;
  for (const auto& item : r.items) {
    if (item.name == "ks_p_value") {
      saw_ks = true;
      CHECK(item.checked);
    }
    if (item.name == "median_rel_shift") {
      saw_shift = true;
      CHECK_FALSE(item.checked);  // informational
    }
  }
  CHECK(saw_ks);
  CHECK(saw_shift);
}
