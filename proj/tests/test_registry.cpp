#include <doctest.h>

#include "aigve/components.hpp"
#include "aigve/registry.hpp"
#include "test_util.hpp"

using namespace aigve;
using config::ConfigNode;

namespace {

struct Stub final : Metric {
  explicit Stub(ConfigNode p) : params(std::move(p)) {}
  void process(std::span<const EvalSample>, ProcessOutput&) override {}
  std::map<std::string, double> compute_metrics() override { return {}; }
  ConfigNode params;
};

Registry<Metric>::Factory stub_factory() {
  return [](const ConfigNode& p, const BuildContext&) { return std::make_unique<Stub>(p); };
}

}  // namespace

TEST_CASE("register and list") {
  Registry<Metric> reg(ComponentKind::Metric);
  CHECK(reg.list().empty());
  reg.register_component("fid", MetricCategory::DistributionComparison, stub_factory());
  reg.register_component("clip_sim", MetricCategory::VLSimilarity, stub_factory());
  const auto entries = reg.list();
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].name == "clip_sim");
  CHECK(entries[1].name == "fid");
  CHECK(entries[0].category == MetricCategory::VLSimilarity);
  CHECK(entries[1].category == MetricCategory::DistributionComparison);
  CHECK_ERRC(reg.register_component("fid", MetricCategory::DistributionComparison, stub_factory()),
             Errc::DuplicateName);
  CHECK_ERRC(reg.register_component("x", std::nullopt, stub_factory()), Errc::InvalidArgument);
}

TEST_CASE("categories round-trip through their names") {
  for (auto c : {MetricCategory::DistributionComparison, MetricCategory::VideoOnlyNN, MetricCategory::VLSimilarity,
                 MetricCategory::VLUnderstanding, MetricCategory::MultiFaceted})
    CHECK(parse_category(to_string(c)) == c);
  CHECK(to_string(MetricCategory::VideoOnlyNN) == "video_only_nn");
  CHECK_FALSE(parse_category("other").has_value());
}

TEST_CASE("build passes the spec minus type") {
  Registry<Metric> reg(ComponentKind::Metric);
  reg.register_component("fid", MetricCategory::DistributionComparison, stub_factory());
  auto built = reg.build(ConfigNode{{"type", "fid"}, {"feature_source", "clip_frame"}});
  auto* stub = dynamic_cast<Stub*>(built.get());
  REQUIRE(stub != nullptr);
  CHECK(stub->params == ConfigNode{{"feature_source", "clip_frame"}});
}

TEST_CASE("build errors") {
  Registry<Metric> reg(ComponentKind::Metric);
  reg.register_component("clip_sim", MetricCategory::VLSimilarity, stub_factory());
  reg.register_component("failing", MetricCategory::VLSimilarity,
                         [](const ConfigNode&, const BuildContext&) -> std::unique_ptr<Metric> {
                           throw Error(Errc::SchemaError, "bad option");
                         });
  try {
    reg.build(ConfigNode{{"type", "clip_sm"}});
    FAIL("expected UnknownType");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownType);
    CHECK(std::string(e.what()).find("did you mean 'clip_sim'") != std::string::npos);
  }
  CHECK_ERRC(reg.build(ConfigNode{{"type", "nope"}}), Errc::UnknownType);
  CHECK_ERRC(reg.build(ConfigNode{{"type", "failing"}}), Errc::FactoryError);
  CHECK_ERRC(reg.build(ConfigNode{{"kind", "clip_sim"}}), Errc::SchemaError);
  CHECK_ERRC(reg.build(ConfigNode::array()), Errc::SchemaError);
}

TEST_CASE("frozen registries reject registration") {
  Registry<Metric> reg(ComponentKind::Metric);
  reg.freeze();
  CHECK(reg.frozen());
  CHECK_ERRC(reg.register_component("a", MetricCategory::VLSimilarity, stub_factory()), Errc::RegistryFrozen);
}

TEST_CASE("registration order does not affect listing or builds") {
  Registry<Metric> a(ComponentKind::Metric), b(ComponentKind::Metric);
  for (auto name : {"m3", "m1", "m2"}) a.register_component(name, MetricCategory::MultiFaceted, stub_factory());
  for (auto name : {"m2", "m3", "m1"}) b.register_component(name, MetricCategory::MultiFaceted, stub_factory());
  std::vector<std::string> names_a, names_b;
  for (const auto& e : a.list()) names_a.push_back(e.name);
  for (const auto& e : b.list()) names_b.push_back(e.name);
  CHECK(names_a == names_b);
  CHECK(names_a == std::vector<std::string>{"m1", "m2", "m3"});
  auto spec = ConfigNode{{"type", "m2"}, {"k", 1}};
  CHECK(dynamic_cast<Stub&>(*a.build(spec)).params == dynamic_cast<Stub&>(*b.build(spec)).params);
}

TEST_CASE("levenshtein") {
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("fid", "fvd") == 1);
  CHECK(levenshtein("abc", "") == 3);
}

TEST_CASE("built-in registries") {
  const auto& r = builtin_registries();
  CHECK(r.metrics.frozen());
  CHECK(r.metrics.category("fid") == MetricCategory::DistributionComparison);
  CHECK(r.metrics.category("clip_sim") == MetricCategory::VLSimilarity);
  CHECK(r.metrics.category("gst_vqa_style") == MetricCategory::VideoOnlyNN);
  CHECK(r.datasets.contains("annotation_dataset"));
  CHECK(r.loops.contains("eval_loop"));
  for (const auto& entry : r.metrics.list()) CHECK(entry.category.has_value());
}

TEST_CASE("metric factories validate their options") {
  const auto& r = builtin_registries();
  CHECK_ERRC(build_metric(r, ConfigNode{{"type", "clip_sim"}, {"bogus", 1}}, {}), Errc::FactoryError);
  CHECK_ERRC(build_metric(r, ConfigNode{{"type", "clip_sim"}, {"scale", "big"}}, {}), Errc::FactoryError);
  CHECK_ERRC(build_metric(r, ConfigNode{{"type", "gst_vqa_style"}}, {}), Errc::FactoryError);
  auto m = build_metric(r, ConfigNode{{"type", "clip_temp"}, {"name", "temporal"}}, {});
  CHECK(m->name() == "temporal");
  CHECK(build_metric(r, ConfigNode{{"type", "dynamics_energy"}}, {})->name() == "dynamics_energy");
  CHECK_ERRC(build_metrics(r, ConfigNode::array(), {}), Errc::SchemaError);
}
