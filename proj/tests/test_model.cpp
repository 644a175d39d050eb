#include <doctest.h>

#include <string>
#include <vector>

#include "mlfd/model.hpp"
#include "support/generators.hpp"

using namespace mlfd;

namespace {

std::vector<std::string> child_names(const value_binding& b) {
  std::vector<std::string> names;
  for (const auto& c : b.children) names.push_back(c.element);
  return names;
}

const value_binding* find(const value_binding& b, const std::string& name) {
  for (const auto& c : b.children)
    if (c.element == name) return &c;
  return nullptr;
}

complex_object image_object() {
  complex_object obj;
  obj.name = "Sample image";
  obj.date = "2001-06-15";
  obj.source = "Local";
  subdocument sub;
  sub.doc_name = "scissors.bmp";
  sub.doc_type = "Image";
  sub.size_bytes = 24694;
  sub.location = "scissors.bmp";
  sub.keywords = {"scissors", "black", "white"};
  image_payload image;
  image.compression = "None";
  image.format = "Bitmap";
  image.resolution_dpi = 100;
  image.length_px = 192;
  image.width_px = 256;
  sub.payload = image;
  obj.subdocuments.push_back(std::move(sub));
  return obj;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("image object binds to the expected tree") {
  auto binding = to_binding(image_object());
  CHECK(binding.element == "COMPLEX_OBJECT");
  CHECK(child_names(binding) ==
        std::vector<std::string>{"OBJ_NAME", "DATE", "SOURCE", "SUBDOCUMENT"});
  CHECK(binding.children[0].value == "Sample image");
  CHECK(binding.children[1].value == "2001-06-15");
  CHECK(binding.children[2].value == "Local");

  const auto& sub = binding.children[3];
  CHECK(child_names(sub) == std::vector<std::string>{"DOC_NAME", "TYPE", "SIZE", "LOCATION",
                                                     "KEYWORD", "KEYWORD", "KEYWORD", "IMAGE"});
  CHECK(*find(sub, "SIZE")->value == "24694 Bytes");
  CHECK(find(sub, "LANGUAGE") == nullptr);

  const auto& image = *find(sub, "IMAGE");
  CHECK(child_names(image) == std::vector<std::string>{"COMPRESSION", "FORMAT", "RESOLUTION",
                                                       "LENGTH", "WIDTH"});
  CHECK(*image.children[2].value == "100 dpi");
  CHECK(*image.children[3].value == "192");
  CHECK(*image.children[4].value == "256");
}

TEST_CASE("optional fields are omitted, absent values stay absent") {
  complex_object obj = image_object();
  obj.subdocuments[0].language = "English";
  std::get<image_payload>(obj.subdocuments[0].payload).resolution_dpi.reset();

  auto binding = to_binding(obj);
  const auto& sub = binding.children[3];
  REQUIRE(find(sub, "LANGUAGE") != nullptr);
  CHECK(*find(sub, "LANGUAGE")->value == "English");
  const auto& image = *find(sub, "IMAGE");
  CHECK(!image.children[2].value.has_value());  // RESOLUTION: empty element later
}

TEST_CASE("two-attribute one-tuple view binds in order") {
  relational_view view;
  view.attributes = {{"id", domain::integer}, {"name", domain::text}};
  view.tuples = {{{"id", "1"}, {"name", "Ann"}}};

  complex_object obj = image_object();
  obj.subdocuments[0].payload = view;
  auto binding = to_binding(obj);
  const auto& rv = *find(binding.children[3], "RELATIONAL_VIEW");
  CHECK(child_names(rv) == std::vector<std::string>{"ATTRIBUTE", "ATTRIBUTE", "TUPLE"});
  CHECK(child_names(rv.children[0]) == std::vector<std::string>{"ATT_NAME", "DOMAIN"});
  CHECK(*rv.children[0].children[0].value == "id");
  CHECK(*rv.children[0].children[1].value == "integer");
  CHECK(child_names(rv.children[2]) ==
        std::vector<std::string>{"ATT_NAME_REF", "VALUE", "ATT_NAME_REF", "VALUE"});
  CHECK(*rv.children[2].children[1].value == "1");
  CHECK(*rv.children[2].children[3].value == "Ann");

  view.query = "SELECT id, name FROM people";
  obj.subdocuments[0].payload = view;
  auto with_query = to_binding(obj);
  const auto& rv2 = *find(with_query.children[3], "RELATIONAL_VIEW");
  CHECK(rv2.children[0].element == "QUERY");
}

TEST_CASE("temporal and text bindings select one branch") {
  complex_object obj = image_object();

  temporal_payload sound;
  sound.duration_secs = 2.0;
  sound.speed = 8000.0;
  sound.media = sound_track{"chirp.wav"};
  obj.subdocuments[0].payload = sound;
  auto b1 = to_binding(obj);
  const auto& temporal = *find(b1.children[3], "TEMPORAL");
  CHECK(child_names(temporal) == std::vector<std::string>{"DURATION", "SPEED", "SOUND"});
  CHECK(*temporal.children[0].value == "2.000");
  CHECK(*temporal.children[1].value == "8000");

  temporal_payload video;
  video.speed = 29.97;
  video.media = video_track{std::nullopt};
  obj.subdocuments[0].payload = video;
  auto b2 = to_binding(obj);
  const auto& t2 = *find(b2.children[3], "TEMPORAL");
  CHECK(child_names(t2) == std::vector<std::string>{"DURATION", "SPEED", "VIDEO"});
  CHECK(!t2.children[0].value.has_value());
  CHECK(*t2.children[1].value == "29.97");
  CHECK(!t2.children[2].value.has_value());

  text_payload text;
  text.nb_char = 5;
  text.nb_lines = 2;
  text.body = plain_text{"ab\ncd"};
  obj.subdocuments[0].payload = text;
  auto b3 = to_binding(obj);
  const auto& tx = *find(b3.children[3], "TEXT");
  CHECK(child_names(tx) == std::vector<std::string>{"NB_CHAR", "NB_LINES", "PLAIN_TEXT"});

  text.body = tagged_text{"<a href=\"x\">go</a>", {"x"}};
  obj.subdocuments[0].payload = text;
  auto b4 = to_binding(obj);
  const auto& tagged = *find(*find(b4.children[3], "TEXT"), "TAGGED_TEXT");
  CHECK(child_names(tagged) == std::vector<std::string>{"CONTENT", "LINK"});
}

TEST_CASE("referential integrity check") {
  relational_view ok;
  ok.attributes = {{"id", domain::integer}, {"name", domain::text}};
  ok.tuples = {{{"id", "1"}, {"name", "Ann"}}};
  CHECK(check_referential_integrity(ok).empty());

  relational_view bad;
  bad.attributes = {{"id", domain::integer}};
  bad.tuples = {{{"idd", "1"}}};
  auto violations = check_referential_integrity(bad);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].tuple_index == 0);
  CHECK(violations[0].att_name_ref == "idd");
}

TEST_CASE("well-formed random tuples never violate referential integrity") {
  testsupport::gen g(7);
  const auto names = g.distinct_words(3);
  relational_view view;
  for (const auto& n : names) view.attributes.push_back({n, domain::text});
  for (int t = 0; t < 100; ++t) {
    view_tuple tuple;
    for (const auto& attr : view.attributes)
      tuple.push_back({attr.name, g.chance(50) ? std::nullopt
                                               : std::optional<std::string>(g.word())});
    view.tuples.push_back(std::move(tuple));
  }
  CHECK(check_referential_integrity(view).empty());
  CHECK(check_invariants(complex_object{"x", "2001-01-01", "y",
                                        {subdocument{"a", "View", 0, "a.csv", std::nullopt,
                                                     {}, view}}})
            .empty());
}

TEST_CASE("malformed objects are rejected with a path") {
  complex_object obj = image_object();
  obj.subdocuments.clear();
  CHECK_THROWS_AS(to_binding(obj), invariant_violation);

  obj = image_object();
  obj.name.clear();
  try {
    to_binding(obj);
    FAIL("expected invariant_violation");
  } catch (const invariant_violation& e) {
    CHECK(e.path == "name");
  }

  obj = image_object();
  obj.subdocuments[0].keywords = {"a", "a"};
  try {
    to_binding(obj);
    FAIL("expected invariant_violation");
  } catch (const invariant_violation& e) {
    CHECK(e.path == "subdocuments[0].keywords[1]");
  }

  obj = image_object();
  obj.subdocuments[0].keywords = {""};
  CHECK_THROWS_AS(to_binding(obj), invariant_violation);

  obj = image_object();
  std::get<image_payload>(obj.subdocuments[0].payload).width_px = 0;
  CHECK_THROWS_AS(to_binding(obj), invariant_violation);

  obj = image_object();
  obj.subdocuments[0].payload = relational_view{};  // no attributes
  CHECK_THROWS_AS(to_binding(obj), invariant_violation);

  obj = image_object();
  relational_view out_of_order;
  out_of_order.attributes = {{"a", domain::text}, {"b", domain::text}};
  out_of_order.tuples = {{{"b", "1"}, {"a", "2"}}};
  obj.subdocuments[0].payload = out_of_order;
  CHECK_THROWS_AS(to_binding(obj), invariant_violation);
}

TEST_CASE("binding preserves order everywhere") {
  testsupport::gen g(99);
  for (int i = 0; i < 50; ++i) {
    auto obj = testsupport::gen_object(g);
    auto binding = to_binding(obj);

    std::vector<std::string> bound_names;
    for (const auto& c : binding.children)
      if (c.element == "SUBDOCUMENT") bound_names.push_back(*c.children[0].value);
    std::vector<std::string> object_names;
    for (const auto& sub : obj.subdocuments) object_names.push_back(sub.doc_name);
    CHECK(bound_names == object_names);

    for (std::size_t s = 0; s < obj.subdocuments.size(); ++s) {
      const auto& sub_binding = binding.children[3 + s];
      std::vector<std::string> keywords;
      for (const auto& c : sub_binding.children)
        if (c.element == "KEYWORD") keywords.push_back(*c.value);
      CHECK(keywords == obj.subdocuments[s].keywords);
    }
  }
}

TEST_CASE("every payload binds exactly one choice branch") {
  testsupport::gen g(123);
  const std::vector<std::string> payload_names = {"TEXT", "RELATIONAL_VIEW", "IMAGE", "TEMPORAL"};
  for (int variant = 0; variant < 6; ++variant) {
    auto obj = testsupport::gen_object(g, variant);
    auto binding = to_binding(obj);
    for (const auto& sub : binding.children) {
      if (sub.element != "SUBDOCUMENT") continue;
      int hits = 0;
      for (const auto& c : sub.children)
        for (const auto& p : payload_names)
          if (c.element == p) ++hits;
      CHECK(hits == 1);
    }
  }
}

}  // TEST_SUITE
