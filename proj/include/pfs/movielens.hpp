#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pfs/profile.hpp"

namespace pfs {

// Ordered genre vocabulary. Token lookup is case-insensitive and ignores
// punctuation, so dataset spellings such as "Children" or "Film-Noir" resolve
// to the canonical labels.
class GenreVocabulary {
 public:
  explicit GenreVocabulary(std::vector<std::string> names);

  // The 19 movie genres, alphabetical.
  static GenreVocabulary movielens19();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view token) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct RatingRecord {
  std::int64_t user_id;
  std::int64_t movie_id;
  double rating;  // retained but unused by profiles
  std::int64_t timestamp;
};

struct MovieCatalog {
  std::unordered_map<std::int64_t, std::vector<std::uint16_t>> genres;
  std::size_t unknown_genre_tokens = 0;  // skipped tokens, when allowed
};

enum class GenreWeight { kFull, kFractional };

struct IngestOptions {
  std::size_t min_ratings = 20;
  double smoothing = 0.0;
  GenreWeight genre_weight = GenreWeight::kFull;
  bool ignore_unknown_genres = false;
  bool ignore_unknown_movies = false;
};

struct UserProfile {
  std::int64_t user_id;
  std::vector<double> counts;
  Pmf q;
};

struct UserProfileSet {
  std::vector<std::string> genre_names;
  std::vector<UserProfile> users;  // ascending user_id
  Pmf population;                  // unweighted mean of user PMFs
  std::size_t total_users = 0;
  std::vector<std::int64_t> eligible_users;  // positivity filter output
  std::size_t skipped_ratings = 0;           // unknown-movie ratings skipped

  const UserProfile* find(std::int64_t user_id) const;
};

// Lines of the form `MovieID::Title::Genre1|Genre2|...`. Unknown genre tokens
// (including the empty field) either reject the file or are skipped with a
// count, per `ignore_unknown_genres`.
// Throws MalformedLine, UnknownGenre.
MovieCatalog parse_movies(std::istream& in, const GenreVocabulary& vocab,
                          bool ignore_unknown_genres = false);

// Lines of the form `UserID::MovieID::Rating::Timestamp`, streamed in file
// order with constant memory. Throws MalformedLine.
void parse_ratings(std::istream& in,
                   const std::function<void(const RatingRecord&)>& sink);
std::vector<RatingRecord> parse_ratings(std::istream& in);

// Builds per-user genre count histograms and the population profile. A
// rating increments every genre of the rated movie (full weight) or spreads
// one unit across them (fractional). Users with fewer than min_ratings
// resolved ratings are dropped; smoothing is added to every genre count
// before normalization. Throws UnknownMovie unless configured to skip.
UserProfileSet build_profiles(std::istream& ratings, const MovieCatalog& movies,
                              const GenreVocabulary& vocab,
                              const IngestOptions& options = {});

// Users whose profile is strictly positive in every genre.
// Throws PopulationDegenerate if the population profile has a zero component.
std::vector<std::int64_t> positivity_filter(const UserProfileSet& profiles);

}  // namespace pfs
