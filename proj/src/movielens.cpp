#include "pfs/movielens.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace pfs {

namespace {

std::string normalize_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line,
                                    std::string_view sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

std::int64_t parse_int(std::string_view text, std::size_t line_number,
                       const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw MalformedLine(std::string("bad ") + what + " field '" +
                            std::string(text) + "'",
                        line_number);
  }
  return value;
}

double parse_real(std::string_view text, std::size_t line_number,
                  const char* what) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(std::string(text), &consumed);
    if (consumed != text.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw MalformedLine(std::string("bad ") + what + " field '" +
                            std::string(text) + "'",
                        line_number);
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

GenreVocabulary::GenreVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) {
    throw InvariantViolation("genre vocabulary must not be empty");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto [it, inserted] = lookup_.emplace(normalize_token(names_[i]), i);
    if (!inserted) {
      throw InvariantViolation("duplicate genre name '" + names_[i] + "'");
    }
  }
  // Dataset releases shortened "children's" to "Children".
  const auto childrens = lookup_.find("childrens");
  if (childrens != lookup_.end()) {
    lookup_.emplace("children", childrens->second);
  }
}

GenreVocabulary GenreVocabulary::movielens19() {
  return GenreVocabulary({"action", "adventure", "animation", "children's",
                          "comedy", "crime", "documentary", "drama", "fantasy",
                          "film-noir", "horror", "IMAX", "musical", "mystery",
                          "romance", "sci-fi", "thriller", "war", "western"});
}

std::optional<std::size_t> GenreVocabulary::index_of(
    std::string_view token) const {
  const auto it = lookup_.find(normalize_token(token));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

MovieCatalog parse_movies(std::istream& in, const GenreVocabulary& vocab,
                          bool ignore_unknown_genres) {
  MovieCatalog catalog;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, "::");
    if (fields.size() != 3) {
      throw MalformedLine("expected MovieID::Title::Genres", line_number);
    }
    const std::int64_t movie_id = parse_int(fields[0], line_number, "movie id");
    std::vector<std::uint16_t> genre_ids;
    for (std::string_view token : split(fields[2], "|")) {
      const auto idx = vocab.index_of(token);
      if (!idx) {
        if (!ignore_unknown_genres) {
          throw UnknownGenre("unknown genre '" + std::string(token) +
                             "' on line " + std::to_string(line_number));
        }
        ++catalog.unknown_genre_tokens;
        continue;
      }
      genre_ids.push_back(static_cast<std::uint16_t>(*idx));
    }
    catalog.genres[movie_id] = std::move(genre_ids);
  }
  return catalog;
}

void parse_ratings(std::istream& in,
                   const std::function<void(const RatingRecord&)>& sink) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, "::");
    if (fields.size() != 4) {
      throw MalformedLine("expected UserID::MovieID::Rating::Timestamp",
                          line_number);
    }
    sink(RatingRecord{parse_int(fields[0], line_number, "user id"),
                      parse_int(fields[1], line_number, "movie id"),
                      parse_real(fields[2], line_number, "rating"),
                      parse_int(fields[3], line_number, "timestamp")});
  }
}

std::vector<RatingRecord> parse_ratings(std::istream& in) {
  std::vector<RatingRecord> records;
  parse_ratings(in, [&](const RatingRecord& rec) { records.push_back(rec); });
  return records;
}

const UserProfile* UserProfileSet::find(std::int64_t user_id) const {
  const auto it = std::lower_bound(
      users.begin(), users.end(), user_id,
      [](const UserProfile& u, std::int64_t id) { return u.user_id < id; });
  if (it == users.end() || it->user_id != user_id) return nullptr;
  return &*it;
}

UserProfileSet build_profiles(std::istream& ratings,
                              const MovieCatalog& movies,
                              const GenreVocabulary& vocab,
                              const IngestOptions& options) {
  const std::size_t n = vocab.size();

  struct Accumulator {
    std::vector<double> counts;
    std::size_t ratings = 0;
  };
  std::map<std::int64_t, Accumulator> acc;
  std::size_t skipped = 0;

  parse_ratings(ratings, [&](const RatingRecord& rec) {
    const auto movie = movies.genres.find(rec.movie_id);
    if (movie == movies.genres.end()) {
      if (options.ignore_unknown_movies) {
        ++skipped;
        return;
      }
      throw UnknownMovie("rating references unknown movie " +
                         std::to_string(rec.movie_id));
    }
    auto& user = acc[rec.user_id];
    if (user.counts.empty()) user.counts.assign(n, 0.0);
    ++user.ratings;
    const auto& genre_ids = movie->second;
    if (genre_ids.empty()) return;
    const double weight = options.genre_weight == GenreWeight::kFull
                              ? 1.0
                              : 1.0 / static_cast<double>(genre_ids.size());
    for (std::uint16_t g : genre_ids) user.counts[g] += weight;
  });

  std::vector<UserProfile> users;
  std::vector<double> population(n, 0.0);
  for (auto& [user_id, a] : acc) {
    if (a.ratings < options.min_ratings) continue;
    std::vector<double> smoothed = a.counts;
    double total = 0.0;
    for (double& c : smoothed) {
      c += options.smoothing;
      total += c;
    }
    if (total <= 0.0) continue;  // no countable genre mass at all
    std::vector<double> q(n);
    for (std::size_t k = 0; k < n; ++k) q[k] = smoothed[k] / total;
    for (std::size_t k = 0; k < n; ++k) population[k] += q[k];
    users.push_back(UserProfile{user_id, std::move(a.counts), Pmf(q)});
  }

  if (users.empty()) {
    throw EmptyPopulation("no user passed the minimum-ratings requirement");
  }
  const double inv = 1.0 / static_cast<double>(users.size());
  for (double& x : population) x *= inv;
  const std::size_t total_users = users.size();
  return UserProfileSet{vocab.names(),          std::move(users),
                        Pmf(std::move(population)), total_users,
                        {},                     skipped};
}

std::vector<std::int64_t> positivity_filter(const UserProfileSet& profiles) {
  for (std::size_t k = 0; k < profiles.population.size(); ++k) {
    if (!(profiles.population[k] > 0.0)) {
      throw PopulationDegenerate("population profile is zero in genre '" +
                                 profiles.genre_names[k] + "'");
    }
  }
  std::vector<std::int64_t> eligible;
  for (const UserProfile& user : profiles.users) {
    bool positive = true;
    for (std::size_t k = 0; k < user.q.size(); ++k) {
      if (!(user.q[k] > 0.0)) {
        positive = false;
        break;
      }
    }
    if (positive) eligible.push_back(user.user_id);
  }
  return eligible;
}

}  // namespace pfs
