#include <regex>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "vowelkit/svg_plot.hpp"

using namespace vowelkit;

namespace {

// Minimal structural check: every opening tag is closed in order.
bool balanced(const std::string& xml) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty();
}

std::string group(const std::string& svg, const std::string& cls) {
  const auto start = svg.find("<g class=\"" + cls + "\"");
  const auto body = svg.find('\n', start) + 1;
  return svg.substr(body, svg.find("</g>", body) - body);
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("svg_plot") {

TEST_CASE("document structure, points and legend") {
  ScatterPlot plot{"F1 vs F2 <test>", "F2 (Hz)", "F1 (Hz)", {}};
  const char* labels[] = {"uu", "aa", "ee", "ax", "oo", "ah", "ae", "ix", "zz"};
  for (int i = 0; i < 45; ++i) plot.points.push_back({1000.0 + 10 * i, 500.0 - 3 * i, labels[i % 9]});
  const std::string svg = render_svg(plot);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(balanced(svg));
  CHECK(svg.find("&lt;test&gt;") != std::string::npos);
  CHECK(count(group(svg, "points"), "\n") == 45);
  CHECK(count(group(svg, "legend"), "<text") == 9);
  CHECK(legend_labels(plot) == std::vector<std::string>{"aa", "ae", "ah", "ax", "ee", "ix", "oo", "uu", "zz"});
}

TEST_CASE("degenerate inputs still render") {
  CHECK(balanced(render_svg(ScatterPlot{"empty", "x", "y", {}})));
  CHECK(balanced(render_svg(ScatterPlot{"one", "x", "y", {{1.0, 1.0, "a"}}})));
  CHECK(balanced(render_svg(ScatterPlot{"flat", "x", "y", {{1.0, 1.0, "a"}, {1.0, 1.0, "b"}}})));
}

TEST_CASE("rendering is deterministic and written verbatim") {
  const ScatterPlot plot{"t", "x", "y", {{-1.5, 2.25, "a"}, {3.0, -4.0, "b"}}};
  vowelkit::testing::TempDir dir;
  write_svg(plot, dir / "p.svg");
  CHECK(vowelkit::testing::read_file(dir / "p.svg") == render_svg(plot));
  CHECK_THROWS(write_svg(plot, dir.path() / "missing" / "p.svg"));
}

}  // TEST_SUITE
