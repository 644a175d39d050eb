#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>

#include "mlfd/cli.hpp"
#include "support/fixtures.hpp"

using namespace mlfd;
using testsupport::make_bmp;
using testsupport::make_wav;
using testsupport::scratch_dir;

namespace {

const std::string repo_dtd = std::string(MLFD_REPO_DIR) + "/assets/mlfd.dtd";

std::string image_manifest_text(const std::string& location = "scissors.bmp") {
  return "# sample object\n"
         "[object]\n"
         "name = Sample image\n"
         "date = 2001-06-15\n"
         "source = Local\n"
         "\n"
         "[subdocument]\n"
         "location = " + location + "\n"
         "keywords = scissors, black, white\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("manifests parse into specs") {
  auto m = parse_manifest(
      "[object]\n"
      "name = Press\n"
      "date = 2001-05-15\n"
      "source = Reuters\n"
      "[subdocument]\n"
      "location = a.sgml\n"
      "type = tagged\n"
      "language = English\n"
      "keywords = France, SNCF\n"
      "[subdocument]\n"
      "location = t.csv\n"
      "view_mode = intension\n"
      "query = SELECT *\n");
  CHECK(m.object_name == "Press");
  CHECK(m.date == "2001-05-15");
  REQUIRE(m.subdocuments.size() == 2);
  CHECK(m.subdocuments[0].declared_type == source_type::tagged);
  CHECK(m.subdocuments[0].language == "English");
  CHECK(m.subdocuments[0].keywords == std::vector<std::string>{"France", "SNCF"});
  CHECK(m.subdocuments[1].mode == view_mode::intension);
  CHECK(m.subdocuments[1].query == "SELECT *");
}

TEST_CASE("manifest errors") {
  const std::string head = "[object]\nname = x\ndate = 2001-01-01\nsource = s\n";
  CHECK_THROWS_AS(parse_manifest(""), manifest_error);
  CHECK_THROWS_AS(parse_manifest(head), manifest_error);  // no subdocument
  CHECK_THROWS_AS(parse_manifest(head + "[subdocument]\n"), manifest_error);  // no location
  CHECK_THROWS_AS(parse_manifest(head + "[subdocument]\nlocation = a\ncolor = red\n"),
                  manifest_error);  // unknown key
  CHECK_THROWS_AS(parse_manifest(head + "[object]\n[subdocument]\nlocation = a\n"),
                  manifest_error);  // duplicate object section
  CHECK_THROWS_AS(
      parse_manifest("[object]\nname = x\ndate = Jan 5, 2001\nsource = s\n"
                     "[subdocument]\nlocation = a\n"),
      manifest_error);  // date format
  CHECK_THROWS_AS(parse_manifest(head + "[subdocument]\nlocation = a\nlocation = b\n"),
                  manifest_error);  // repeated key
  CHECK_THROWS_AS(parse_manifest(head + "[subdocument]\nlocation = a\nkind = video\n"),
                  manifest_error);  // kind without temporal type
  CHECK_THROWS_AS(
      parse_manifest(head + "[subdocument]\nlocation = a\ntype = temporal\nduration = 3\n"),
      manifest_error);  // duration without kind = video
  CHECK_THROWS_AS(parse_manifest("name = x\n"), manifest_error);  // entry before section
}

TEST_CASE("comments and blank lines are ignored, values keep inner spaces") {
  auto m = parse_manifest(
      "# header comment\n"
      "\n"
      "[object]\n"
      "name = Two words here\n"
      "date = 2001-01-01\n"
      "source = s\n"
      "[subdocument]\n"
      "location = some file.txt\n");
  CHECK(m.object_name == "Two words here");
  CHECK(m.subdocuments[0].location == "some file.txt");
}

TEST_CASE("integrate, validate and inspect round trip") {
  scratch_dir dir;
  dir.file("scissors.bmp", make_bmp({256, 192, 24, 0, 3937, 3937}));
  const auto manifest_path = dir.file("image.manifest", image_manifest_text());
  const auto out_path = (dir.path / "image.xml").string();

  std::ostringstream diag;
  CHECK(run_integrate(manifest_path, repo_dtd, out_path, diag) == 0);
  CHECK(diag.str().empty());
  REQUIRE(std::filesystem::exists(out_path));

  std::ostringstream out, diag2;
  CHECK(run_validate(out_path, repo_dtd, out, diag2) == 0);
  CHECK(out.str().empty());

  std::ostringstream inspect_out, diag3;
  CHECK(run_inspect(out_path, inspect_out, diag3) == 0);
  CHECK(inspect_out.str() ==
        "scissors.bmp  Image  147510 Bytes  3 keywords  image\n");
}

TEST_CASE("inspect output lines") {
  scratch_dir dir;
  const std::string document =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<!DOCTYPE COMPLEX_OBJECT SYSTEM \"mlfd.dtd\">\n"
      "<COMPLEX_OBJECT>\n"
      "  <OBJ_NAME>Reuters Press Release</OBJ_NAME>\n"
      "  <DATE>2001-05-15</DATE>\n"
      "  <SOURCE>Reuters</SOURCE>\n"
      "  <SUBDOCUMENT>\n"
      "    <DOC_NAME>SGMLdoc</DOC_NAME>\n"
      "    <TYPE>SGML</TYPE>\n"
      "    <SIZE>820 Bytes</SIZE>\n"
      "    <LOCATION>SGMLfile.sgml</LOCATION>\n"
      "    <LANGUAGE>English</LANGUAGE>\n"
      "    <KEYWORD>France</KEYWORD>\n"
      "    <KEYWORD>SNCF</KEYWORD>\n"
      "    <TEXT>\n"
      "      <NB_CHAR>790</NB_CHAR>\n"
      "      <NB_LINES>12</NB_LINES>\n"
      "      <TAGGED_TEXT>\n"
      "        <CONTENT><![CDATA[<TITLE>x</TITLE>]]></CONTENT>\n"
      "      </TAGGED_TEXT>\n"
      "    </TEXT>\n"
      "  </SUBDOCUMENT>\n"
      "</COMPLEX_OBJECT>\n";
  const auto doc_path = dir.file("press.xml", document);
  std::ostringstream out, diag;
  REQUIRE(run_inspect(doc_path, out, diag) == 0);
  CHECK(out.str() == "SGMLdoc  SGML  820 Bytes  2 keywords  tagged-text\n");
}

TEST_CASE("integrate exit codes per failure class") {
  scratch_dir dir;

  SUBCASE("unreadable or malformed manifest is 1") {
    std::ostringstream diag;
    CHECK(run_integrate((dir.path / "missing.manifest").string(), repo_dtd,
                        (dir.path / "o.xml").string(), diag) == 1);
    CHECK(!diag.str().empty());

    const auto bad = dir.file("bad.manifest", "[object]\nname = x\n");
    std::ostringstream diag2;
    CHECK(run_integrate(bad, repo_dtd, (dir.path / "o.xml").string(), diag2) == 1);
  }

  SUBCASE("unreadable document type is 1") {
    const auto manifest_path = dir.file("m.manifest", image_manifest_text());
    std::ostringstream diag;
    CHECK(run_integrate(manifest_path, (dir.path / "no.dtd").string(),
                        (dir.path / "o.xml").string(), diag) == 1);
  }

  SUBCASE("missing source is 2 and the diagnostic names it") {
    const auto manifest_path = dir.file("m.manifest", image_manifest_text("gone.bmp"));
    std::ostringstream diag;
    CHECK(run_integrate(manifest_path, repo_dtd, (dir.path / "o.xml").string(), diag) == 2);
    CHECK(diag.str().find("gone.bmp") != std::string::npos);
  }

  SUBCASE("extractor failures are 2") {
    dir.file("gone.bmp", std::string("BM") + std::string(8, '\0'));  // truncated header
    const auto manifest_path = dir.file("m.manifest", image_manifest_text("gone.bmp"));
    std::ostringstream diag;
    CHECK(run_integrate(manifest_path, repo_dtd, (dir.path / "o.xml").string(), diag) == 2);
  }

  SUBCASE("model invariant violations are 3") {
    dir.file("scissors.bmp", make_bmp({}));
    const auto manifest_path = dir.file(
        "m.manifest",
        "[object]\nname = x\ndate = 2001-01-01\nsource = s\n"
        "[subdocument]\nlocation = scissors.bmp\nkeywords = a, a\n");
    std::ostringstream diag;
    CHECK(run_integrate(manifest_path, repo_dtd, (dir.path / "o.xml").string(), diag) == 3);
    CHECK(!std::filesystem::exists(dir.path / "o.xml"));
  }
}

TEST_CASE("validate exit codes") {
  scratch_dir dir;
  dir.file("scissors.bmp", make_bmp({}));
  const auto manifest_path = dir.file("m.manifest", image_manifest_text());
  const auto out_path = (dir.path / "o.xml").string();
  REQUIRE(run_integrate(manifest_path, repo_dtd, out_path, std::cerr) == 0);

  SUBCASE("violations exit 4 and print the report") {
    auto text = *mlfd::detail::read_file(out_path);
    const auto start = text.find("    <DOC_NAME>");
    const auto end = text.find('\n', start);
    text.erase(start, end - start + 1);
    const auto broken = dir.file("broken.xml", text);
    std::ostringstream out, diag;
    CHECK(run_validate(broken, repo_dtd, out, diag) == 4);
    CHECK(out.str().find("MissingChild\texpected DOC_NAME") != std::string::npos);
  }

  SUBCASE("unreadable or ill-formed input exits 1") {
    std::ostringstream out, diag;
    CHECK(run_validate((dir.path / "absent.xml").string(), repo_dtd, out, diag) == 1);
    const auto not_xml = dir.file("not.xml", "certainly not xml");
    CHECK(run_validate(not_xml, repo_dtd, out, diag) == 1);
  }
}

TEST_CASE("inspect rejects nonconforming documents") {
  scratch_dir dir;
  const auto doc = dir.file("odd.xml", "<COMPLEX_OBJECT><OBJ_NAME>x</OBJ_NAME></COMPLEX_OBJECT>");
  std::ostringstream out, diag;
  CHECK(run_inspect(doc, out, diag) == 1);
  CHECK(out.str().empty());
  CHECK(!diag.str().empty());
}

TEST_CASE("sources can be fetched over http") {
  scratch_dir dir;
  const std::string bmp = make_bmp({});

  httplib::Server server;
  server.Get("/files/photo.bmp", [&bmp](const httplib::Request&, httplib::Response& res) {
    res.set_content(bmp, "image/bmp");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/files/photo.bmp";
  const auto manifest_path = dir.file("m.manifest", image_manifest_text(url));
  const auto out_path = (dir.path / "o.xml").string();
  std::ostringstream diag;
  CHECK(run_integrate(manifest_path, repo_dtd, out_path, diag) == 0);

  auto text = *mlfd::detail::read_file(out_path);
  CHECK(text.find("<DOC_NAME>photo.bmp</DOC_NAME>") != std::string::npos);
  CHECK(text.find("<LOCATION>" + url + "</LOCATION>") != std::string::npos);

  // a status outside 2xx is a fetch failure
  const std::string missing_url = "http://127.0.0.1:" + std::to_string(port) + "/files/none.bmp";
  const auto bad_manifest = dir.file("bad.manifest", image_manifest_text(missing_url));
  std::ostringstream diag2;
  CHECK(run_integrate(bad_manifest, repo_dtd, (dir.path / "o2.xml").string(), diag2) == 2);
  CHECK(diag2.str().find(missing_url) != std::string::npos);

  server.stop();
  server_thread.join();
}

TEST_CASE("fetch timeout honors the environment override") {
  setenv("MLFD_TIMEOUT_SECS", "7", 1);
  CHECK(detail_cli::fetch_timeout_secs() == 7);
  setenv("MLFD_TIMEOUT_SECS", "not-a-number", 1);
  CHECK(detail_cli::fetch_timeout_secs() == 30);
  unsetenv("MLFD_TIMEOUT_SECS");
  CHECK(detail_cli::fetch_timeout_secs() == 30);
}

}  // TEST_SUITE
