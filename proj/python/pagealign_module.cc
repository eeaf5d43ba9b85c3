#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pagealign/bundle.h"
#include "pagealign/cli.h"
#include "pagealign/errors.h"
#include "pagealign/eval.h"
#include "pagealign/fingerprint.h"
#include "pagealign/lcs_align.h"
#include "pagealign/pipeline.h"
#include "pagealign/report.h"

namespace py = pybind11;
using namespace pagealign;

namespace {

py::dict match_result_dict(const MatchResult& r) {
  py::list matches;
  for (const PageMatch& m : r.matches) {
    py::dict d;
    d["old"] = m.old_index;
    d["new"] = m.new_index;
    d["type"] = std::string(to_string(m.type));
    d["confidence"] = m.confidence;
    d["source"] = std::string(to_string(m.source));
    matches.append(d);
  }
  py::dict out;
  out["matches"] = matches;
  out["inserted"] = r.inserted;
  out["deleted"] = r.deleted;
  out["orphans"] = r.orphans;
  out["blank_old"] = r.blank_old;
  out["blank_new"] = r.blank_new;
  return out;
}

Variant variant_from(const std::string& name) {
  auto v = parse_variant(name);
  if (!v) throw py::value_error("unknown variant: " + name);
  return *v;
}

}  // namespace

PYBIND11_MODULE(_pagealign, m) {
  m.doc() = "Page alignment between document revisions";
  m.attr("__version__") = kEngineVersion;

  auto base = py::register_exception<Error>(m, "PagealignError");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<PageFingerprint>(m, "PageFingerprint")
      .def_readonly("content_hash", &PageFingerprint::content_hash)
      .def_readonly("drawing_number", &PageFingerprint::drawing_number)
      .def_readonly("section_title", &PageFingerprint::section_title)
      .def_readonly("phash", &PageFingerprint::phash)
      .def("__repr__", [](const PageFingerprint& fp) {
        std::ostringstream os;
        os << "PageFingerprint(hash='" << fp.content_hash << "', drawing='"
           << fp.drawing_number << "')";
        return os.str();
      });

  py::class_<DocumentBundle>(m, "DocumentBundle")
      .def_readonly("doc_id", &DocumentBundle::doc_id)
      .def_readonly("page_count", &DocumentBundle::page_count)
      .def("texts", [](const DocumentBundle& b) {
        std::vector<std::string> out;
        for (const auto& p : b.pages) out.push_back(p.text);
        return out;
      });

  m.def("load_bundle", &load_bundle, py::arg("path"));
  m.def("fingerprints", &fingerprint_bundle, py::arg("bundle"));
  m.def("normalize_text", &normalize_text, py::arg("text"));
  m.def("extract_drawing_number", &extract_drawing_number, py::arg("text"));
  m.def("text_similarity", &text_similarity, py::arg("a"), py::arg("b"));
  m.def("phash_similarity", &phash_similarity, py::arg("a"), py::arg("b"));

  m.def(
      "sequence_blocks",
      [](const std::vector<std::string>& old_hashes, const std::vector<std::string>& new_hashes) {
        py::list out;
        for (const AlignmentBlock& b : sequence_blocks(old_hashes, new_hashes)) {
          out.append(py::make_tuple(to_string(b.kind),
                                    py::make_tuple(b.old_range.begin, b.old_range.end),
                                    py::make_tuple(b.new_range.begin, b.new_range.end)));
        }
        return out;
      },
      py::arg("old_hashes"), py::arg("new_hashes"));

  m.def(
      "match",
      [](const DocumentBundle& old_doc, const DocumentBundle& new_doc,
         const std::string& variant) {
        MatchResult r;
        {
          py::gil_scoped_release release;
          r = match_documents(old_doc, new_doc, MatchConfig{}, variant_from(variant));
        }
        return match_result_dict(r);
      },
      py::arg("old"), py::arg("new"), py::arg("variant") = "full");

  m.def(
      "evaluate",
      [](const DocumentBundle& old_doc, const DocumentBundle& new_doc,
         const std::filesystem::path& gt_path, const std::string& variant) {
        const Variant v = variant_from(variant);
        const GroundTruth gt = load_ground_truth(gt_path);
        const MatchResult r = run_variant(old_doc, new_doc, v);
        const EvalMetrics metrics = compute_prf(r, gt, old_doc.page_count, new_doc.page_count);
        return py::module_::import("json").attr("loads")(metrics_to_json(metrics, v).dump());
      },
      py::arg("old"), py::arg("new"), py::arg("gt_path"), py::arg("variant") = "full");

  m.def(
      "compare",
      [](const DocumentBundle& old_doc, const DocumentBundle& new_doc,
         const std::filesystem::path& out_dir, const std::string& mode) {
        EngineConfig cfg;
        auto parsed = parse_mode(mode);
        if (!parsed) throw py::value_error("unknown mode: " + mode);
        cfg.mode = *parsed;
        const ComparisonOutput out = compare_bundles(old_doc, new_doc, cfg);
        if (!out_dir.empty()) write_outputs(out, old_doc, new_doc, out_dir);
        return py::module_::import("json").attr("loads")(report_to_json(out.report).dump());
      },
      py::arg("old"), py::arg("new"), py::arg("out_dir") = std::filesystem::path(),
      py::arg("mode") = "full");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
