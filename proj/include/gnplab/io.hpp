#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gnplab/convex.hpp"
#include "gnplab/domain.hpp"
#include "gnplab/gnp.hpp"
#include "gnplab/metric.hpp"
#include "gnplab/thickness.hpp"

namespace gnp {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "gnp-lab/report/1";

/// Parse failures throw InvalidInput naming the offending field path.
ConvexBody convex_from_json(const Json& j, const std::string& path = "convex");
Json to_json(const ConvexBody& c);

/// {"kind": "star_polar" | "graph" | "ball_union" | "disjoint_pair" |
/// "intervals" | "involute" | "offset" | "mapped" | "clipped" | "gallery", ...}
ShapeDomain domain_from_json(const Json& j, const std::string& path = "domain");
Json to_json(const ShapeDomain& d);

Json read_json_file(const std::string& file);
void write_text_file(const std::string& file, const std::string& text);

/// Non-finite numbers become null.
Json number(double v);
Json to_json(Vec2 p);
Json to_json(const CheckReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const ThicknessField& f);

/// Minimal SVG canvas: polylines, circles and text labels in world coordinates.
class Svg {
 public:
  void polyline(const std::vector<Vec2>& pts, const std::string& color, bool closed = false);
  void circle(Vec2 c, double r, const std::string& color);
  void text(Vec2 at, const std::string& label);
  std::string render(int width = 640, int height = 480) const;

 private:
  struct Item {
    int kind;
    std::vector<Vec2> pts;
    double r;
    std::string s;
    bool closed;
  };
  std::vector<Item> items_;
};

/// Outline of a domain for plotting, one polyline per boundary component.
std::vector<std::vector<Vec2>> outline(const ShapeDomain& d, int n = 512);
std::vector<Vec2> outline(const ConvexBody& c, int n = 256);

}  // namespace gnp
