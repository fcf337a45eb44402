#include <sstream>

#include <nlohmann/json.hpp>

#include "yulesim/io.hpp"
#include "yulesim/tail_mc.hpp"

namespace yulesim::tail {
namespace {

using nlohmann::json;

json metadata(const TailCurve& curve) {
  return json{{"theta", curve.params.theta()},
              {"rho", curve.params.rho()},
              {"estimator", std::string(to_string(curve.estimator))},
              {"lambda", curve.lambda},
              {"seed", curve.seed},
              {"shared_paths", curve.shared_paths}};
}

TailCurve curve_from_metadata(const json& meta) {
  try {
    TailCurve curve{ModelParams(meta.at("theta").get<double>(), meta.at("rho").get<double>())};
    curve.estimator = estimator_from_string(meta.at("estimator").get<std::string>());
    curve.lambda = meta.value("lambda", 1.0);
    curve.seed = meta.value("seed", std::uint64_t{0});
    curve.shared_paths = meta.value("shared_paths", false);
    curve.wall_seconds = meta.value("wall_seconds", 0.0);
    return curve;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tail curve metadata: ") + e.what());
  }
}

}  // namespace

std::string to_csv(const TailCurve& curve) {
  std::ostringstream out;
  out << "# curve: " << metadata(curve).dump() << '\n';
  out << "n,estimate,stderr,replicates\n";
  for (const auto& p : curve.points) {
    out << p.n << ',' << io::format_real(p.estimate) << ',' << io::format_real(p.std_error) << ','
        << p.replicates << '\n';
  }
  return out.str();
}

TailCurve tail_curve_from_csv(std::string_view text) {
  std::optional<TailCurve> curve;
  for (const auto& line : io::comment_lines(text)) {
    constexpr std::string_view kTag = "curve: ";
    if (line.starts_with(kTag)) {
      try {
        curve = curve_from_metadata(json::parse(line.substr(kTag.size())));
      } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed curve comment: ") + e.what());
      }
    }
  }
  if (!curve) throw InputError("tail curve CSV lacks its '# curve:' metadata line");

  const auto rows = io::read_csv_rows(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{"n", "estimate", "stderr",
                                                               "replicates"}) {
    throw InputError("tail curve CSV must have header n,estimate,stderr,replicates");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 4) throw InputError("tail curve row " + std::to_string(i) + " needs 4 fields");
    try {
      curve->points.push_back({std::stoull(r[0]), io::parse_real(r[1]), io::parse_real(r[2]),
                               std::stoull(r[3])});
    } catch (const std::logic_error&) {
      throw InputError("malformed tail curve row " + std::to_string(i));
    }
  }
  return *curve;
}

std::string to_json(const TailCurve& curve) {
  json doc = metadata(curve);
  doc["wall_seconds"] = curve.wall_seconds;
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back(
        {{"n", p.n}, {"estimate", p.estimate}, {"stderr", p.std_error}, {"replicates", p.replicates}});
  }
  doc["points"] = std::move(points);
  return doc.dump(2);
}

TailCurve tail_curve_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed tail curve JSON: ") + e.what());
  }
  if (doc.contains("result")) doc = doc["result"];
  TailCurve curve = curve_from_metadata(doc);
  try {
    for (const auto& p : doc.at("points")) {
      curve.points.push_back({p.at("n").get<std::uint64_t>(), p.at("estimate").get<double>(),
                              p.at("stderr").get<double>(), p.at("replicates").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tail curve points: ") + e.what());
  }
  return curve;
}

}  // namespace yulesim::tail
