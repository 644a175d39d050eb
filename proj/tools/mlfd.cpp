// mlfd: integrate heterogeneous sources into complex-object XML documents,
// validate documents against a document type, and inspect their contents.

#include <string>

#include <CLI11.hpp>

#include "mlfd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multiform data integration"};
  app.require_subcommand(1);

  std::string manifest_path, dtd_path, out_path, doc_path;

  auto* integrate = app.add_subcommand(
      "integrate", "build a complex-object document from a manifest of sources");
  integrate->add_option("--manifest", manifest_path, "manifest file")->required();
  integrate->add_option("--dtd", dtd_path, "document type file")->required();
  integrate->add_option("--out", out_path, "output document path")->required();

  auto* validate = app.add_subcommand("validate", "check a document against a document type");
  validate->add_option("--dtd", dtd_path, "document type file")->required();
  validate->add_option("document", doc_path, "document to check")->required();

  auto* inspect = app.add_subcommand("inspect", "summarize a document's subdocuments");
  inspect->add_option("document", doc_path, "document to summarize")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage problems are input errors
  }

  if (integrate->parsed()) return mlfd::run_integrate(manifest_path, dtd_path, out_path);
  if (validate->parsed()) return mlfd::run_validate(doc_path, dtd_path);
  return mlfd::run_inspect(doc_path);
}
