#include <doctest.h>

#include "aigve/annotations.hpp"
#include "aigve/dataset.hpp"
#include "aigve/features.hpp"
#include "corpus.hpp"
#include "test_util.hpp"

using namespace aigve;
using aigve::testing::scratch_dir;
using aigve::testing::write_file;

namespace {

nlohmann::json doc_with(nlohmann::json records, std::optional<int> length = std::nullopt) {
  nlohmann::json doc;
  doc["metainfo"] = {{"name", "t"}};
  if (length) doc["metainfo"]["length"] = *length;
  doc["data_list"] = std::move(records);
  return doc;
}

}  // namespace

TEST_CASE("minimal annotation file") {
  const auto set = parse_annotations(
      doc_with(nlohmann::json::array({{{"id", "v0"}, {"prompt_gt", "a cat"}, {"video_source", "frames/v0"}}})), "/data");
  REQUIRE(set.size() == 1);
  CHECK(set.records[0].id == "v0");
  CHECK(set.records[0].prompt_gt == "a cat");
  CHECK(*set.records[0].video_source == std::filesystem::path("/data/frames/v0"));
  CHECK(set.records[0].features.empty());
  CHECK(set.index_of("v0") == 0);
  CHECK_FALSE(set.index_of("v1").has_value());
}

TEST_CASE("taxonomy labels") {
  const auto record = nlohmann::json{{"id", "v"},
                                     {"prompt_gt", "p"},
                                     {"features", {{"text_embedding", "t.agvf"}}},
                                     {"category", "close_shot"},
                                     {"subjects", {"Animals"}},
                                     {"dynamics", {"Single-Object Actions"}},
                                     {"model", "m"},
                                     {"role", "real"}};
  const auto set = parse_annotations(doc_with(nlohmann::json::array({record}), 1), "/d", {true});
  CHECK(set.warnings.empty());
  const auto& r = set.records[0];
  CHECK(r.category == "close_shot");
  CHECK(r.subjects == std::vector<std::string>{"Animals"});
  CHECK(r.dynamics == std::vector<std::string>{"Single-Object Actions"});
  CHECK(r.model == "m");
  CHECK(r.attribute("role") == "real");
  CHECK(r.features.at("text_embedding") == std::filesystem::path("/d/t.agvf"));

  auto odd = record;
  odd["subjects"] = {"Volcanoes"};
  const auto lenient = parse_annotations(doc_with(nlohmann::json::array({odd})), "/d");
  CHECK(lenient.warnings.size() == 1);
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({odd})), "/d", {true}), Errc::SchemaError);

  CHECK(category_vocabulary().size() == 2);
  CHECK(subject_vocabulary().size() == 13);
  CHECK(dynamics_vocabulary().size() == 6);
}

TEST_CASE("annotation schema errors") {
  const nlohmann::json ok = {{"id", "a"}, {"prompt_gt", "p"}, {"video_source", "x"}};
  auto b = ok;
  b["id"] = "b";
  auto c = ok;
  c["id"] = "c";
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({ok, b, c}), 2), "/"), Errc::SchemaError);
  CHECK_NOTHROW(parse_annotations(doc_with(nlohmann::json::array({ok, b, c}), 3), "/"));
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({ok, ok})), "/"), Errc::DuplicateId);
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({{{"id", "a"}, {"video_source", "x"}}})), "/"),
             Errc::SchemaError);
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({{{"id", "a"}, {"prompt_gt", "p"}}})), "/"),
             Errc::SchemaError);
  CHECK_ERRC(parse_annotations(doc_with(nlohmann::json::array({{{"id", 3}, {"prompt_gt", "p"}, {"video_source", "x"}}})),
                               "/"),
             Errc::SchemaError);
  CHECK_ERRC(parse_annotations(nlohmann::json{{"metainfo", {}}}, "/"), Errc::SchemaError);

  const auto dir = scratch_dir("ann_errors");
  CHECK_ERRC(load_annotations(dir / "missing.json"), Errc::IoError);
  write_file(dir / "bad.json", "{not json");
  CHECK_ERRC(load_annotations(dir / "bad.json"), Errc::SchemaError);
}

TEST_CASE("get_eval_sample") {
  const auto dir = scratch_dir("eval_sample");
  write_frames(dir / "frames" / "v0", aigve::testing::moving_gradient(5, 6, 8, 1, 0));
  write_feature_file(dir / "emb.agvf", FeatureMatrix::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  const nlohmann::json records = nlohmann::json::array(
      {{{"id", "v0"}, {"prompt_gt", "p"}, {"video_source", "frames/v0"}},
       {{"id", "v1"}, {"prompt_gt", "p"}, {"features", {{"emb", "emb.agvf"}}}},
       {{"id", "v2"}, {"prompt_gt", "p"}, {"features", {{"gone", "missing.agvf"}}}},
       {{"id", "v3"}, {"prompt_gt", "p"}, {"video_source", "frames/none"}}});
  write_file(dir / "ann.json", doc_with(records).dump());
  const auto set = load_annotations(dir / "ann.json");
  CHECK(set.name == "t");

  PreprocessOptions pre;
  pre.sampling = SamplingPolicy{3, SamplingStrategy::Uniform, PadMode::RepeatLast};
  pre.resize = FrameSize{4, 4};
  const auto s0 = get_eval_sample(set, 0, pre);
  REQUIRE(s0.frames.has_value());
  CHECK(s0.frames->count == 3);
  CHECK(s0.frames->height == 4);
  CHECK(s0.frames->width == 4);
  CHECK(s0.index == 0);

  const auto s1 = get_eval_sample(set, 1, pre);
  CHECK_FALSE(s1.frames.has_value());
  CHECK(s1.features.at("emb") == FeatureMatrix::matrix(2, 3, {1, 2, 3, 4, 5, 6}));

  try {
    get_eval_sample(set, 2, pre);
    FAIL("expected an IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
    CHECK(std::string(e.what()).find("v2") != std::string::npos);
    CHECK(std::string(e.what()).find("gone") != std::string::npos);
  }
  try {
    get_eval_sample(set, 3, pre);
    FAIL("expected a frame error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("v3") != std::string::npos);
  }
  CHECK_ERRC(get_eval_sample(set, 4, pre), Errc::IndexOutOfRange);

  // Deterministic and pure.
  CHECK(get_eval_sample(set, 0, pre).frames == s0.frames);

  // Without sampling or resize the raw frames come through.
  const auto raw = get_eval_sample(set, 0, {});
  CHECK(raw.frames->count == 5);
  CHECK(raw.frames->height == 6);
}

TEST_CASE("loaders can be injected") {
  AnnotationSet set;
  set.name = "mem";
  SampleRecord r;
  r.id = "x";
  r.prompt_gt = "p";
  r.features["f"] = "/virtual/f.agvf";
  set.records.push_back(r);
  SampleLoaders loaders;
  loaders.features = [](const std::filesystem::path&) { return FeatureMatrix({2}, {7, 8}); };
  AnnotationDataset ds(set, {}, loaders);
  CHECK(ds.size() == 1);
  CHECK(ds.get(0).features.at("f") == FeatureMatrix({2}, {7, 8}));
}
