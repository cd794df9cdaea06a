#include "pfs/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pfs {

namespace {

using nlohmann::json;

constexpr int kStoreSchemaVersion = 1;
constexpr const char* kStoreSchemaName = "pfs-profile-store";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    throw DataError("invalid JSON in " + origin);
  }
  return value;
}

std::vector<double> doubles_from_json(const json& array,
                                      const std::string& origin) {
  if (!array.is_array()) {
    throw DataError("expected a JSON array in " + origin);
  }
  std::vector<double> out;
  out.reserve(array.size());
  for (const auto& v : array) {
    if (!v.is_number()) {
      throw DataError("non-numeric entry in " + origin);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  // %.17g round-trips any double; trim to the shortest representation that
  // still does.
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

Pmf parse_pmf(const std::string& text, const std::string& origin) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    return Pmf(doubles_from_json(parse_json(text, origin), origin));
  }
  std::vector<double> mass;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      std::size_t consumed = 0;
      mass.push_back(std::stod(line, &consumed));
      if (consumed != line.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw MalformedLine("bad value '" + line + "' in " + origin,
                          line_number);
    }
  }
  if (mass.empty()) {
    throw DataError("no values found in " + origin);
  }
  return Pmf(std::move(mass));
}

Pmf load_pmf(const std::filesystem::path& path) {
  return parse_pmf(read_file(path), "'" + path.string() + "'");
}

std::vector<double> AxisSpec::points() const {
  if (steps == 0) {
    throw UsageError("axis needs at least one step");
  }
  if (steps == 1) return {lo};
  std::vector<double> pts(steps);
  const double span = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    pts[k] = lo + span * static_cast<double>(k);
  }
  pts.back() = hi;
  return pts;
}

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec spec;
  bool saw_rho = false, saw_sigma = false;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::istringstream fields(part);
    std::string name, lo, hi, steps;
    if (!std::getline(fields, name, ':') || !std::getline(fields, lo, ':') ||
        !std::getline(fields, hi, ':') || !std::getline(fields, steps)) {
      throw UsageError("bad grid spec part '" + part +
                       "', expected name:LO:HI:N");
    }
    AxisSpec axis;
    try {
      axis.lo = std::stod(lo);
      axis.hi = std::stod(hi);
      const long n = std::stol(steps);
      if (n < 1) throw std::invalid_argument("steps");
      axis.steps = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
      throw UsageError("bad grid spec part '" + part + "'");
    }
    if (name == "rho") {
      spec.rho = axis;
      saw_rho = true;
    } else if (name == "sigma") {
      spec.sigma = axis;
      saw_sigma = true;
    } else {
      throw UsageError("unknown grid axis '" + name + "'");
    }
  }
  if (!saw_rho || !saw_sigma) {
    throw UsageError("grid spec needs both rho and sigma axes");
  }
  return spec;
}

void write_surface_csv(std::ostream& out, const SurfaceGrid& surface) {
  if (!surface.meta.empty()) {
    out << "# " << surface.meta << "\n";
  }
  out << "rho\\sigma";
  for (double s : surface.sigma_axis) out << "," << format_double(s);
  out << "\n";
  for (std::size_t a = 0; a < surface.rho_axis.size(); ++a) {
    out << format_double(surface.rho_axis[a]);
    for (double v : surface.values[a]) out << "," << format_double(v);
    out << "\n";
  }
}

SurfaceGrid read_surface_csv(std::istream& in) {
  SurfaceGrid surface;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      surface.meta = line.size() > 2 ? line.substr(2) : "";
      continue;
    }
    std::istringstream fields(line);
    std::string cell;
    if (!header_done) {
      std::getline(fields, cell, ',');
      if (cell != "rho\\sigma") {
        throw DataError("surface CSV must start with the rho\\sigma corner");
      }
      while (std::getline(fields, cell, ',')) {
        surface.sigma_axis.push_back(std::stod(cell));
      }
      header_done = true;
      continue;
    }
    std::getline(fields, cell, ',');
    surface.rho_axis.push_back(std::stod(cell));
    std::vector<double> row;
    while (std::getline(fields, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (row.size() != surface.sigma_axis.size()) {
      throw DataError("surface CSV row width mismatch");
    }
    surface.values.push_back(std::move(row));
  }
  if (!header_done) {
    throw DataError("empty surface CSV");
  }
  return surface;
}

void write_profile_store(std::ostream& out, const UserProfileSet& profiles) {
  json header{{"schema", kStoreSchemaName},
              {"version", kStoreSchemaVersion},
              {"genres", profiles.genre_names},
              {"total_users", profiles.total_users},
              {"skipped_ratings", profiles.skipped_ratings}};
  out << header.dump() << "\n";
  for (const UserProfile& user : profiles.users) {
    json record{{"user_id", user.user_id},
                {"counts", user.counts},
                {"q", user.q.mass()}};
    out << record.dump() << "\n";
  }
  json tail{{"population", profiles.population.mass()},
            {"eligible_users", profiles.eligible_users}};
  out << tail.dump() << "\n";
}

UserProfileSet read_profile_store(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty profile store");
  }
  const json header = parse_json(line, "profile store header");
  if (header.value("schema", "") != kStoreSchemaName ||
      header.value("version", 0) != kStoreSchemaVersion) {
    throw DataError("unrecognized profile store schema");
  }
  std::vector<std::string> genres =
      header.value("genres", std::vector<std::string>{});
  if (genres.empty()) {
    throw DataError("profile store header lists no genres");
  }

  std::vector<UserProfile> users;
  std::vector<double> population;
  std::vector<std::int64_t> eligible;
  bool saw_tail = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = parse_json(line, "profile store record");
    if (record.contains("population")) {
      population = doubles_from_json(record["population"], "population");
      eligible =
          record.value("eligible_users", std::vector<std::int64_t>{});
      saw_tail = true;
      continue;
    }
    if (!record.contains("user_id")) {
      throw DataError("profile store record without user_id");
    }
    users.push_back(UserProfile{
        record["user_id"].get<std::int64_t>(),
        doubles_from_json(record["counts"], "user counts"),
        Pmf(doubles_from_json(record["q"], "user profile"))});
  }
  if (!saw_tail) {
    throw DataError("profile store is missing the population object");
  }
  const std::size_t total =
      header.value("total_users", static_cast<std::size_t>(users.size()));
  const std::size_t skipped =
      header.value("skipped_ratings", static_cast<std::size_t>(0));
  return UserProfileSet{std::move(genres),   std::move(users),
                        Pmf(std::move(population)), total,
                        std::move(eligible), skipped};
}

UserProfileSet read_profile_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  return read_profile_store(in);
}

}  // namespace pfs
