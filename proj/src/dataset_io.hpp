#ifndef NETCF_DATASET_IO_HPP
#define NETCF_DATASET_IO_HPP

#include <string>

#include "rating_matrix.hpp"

namespace netcf {

/// Rating-file layouts: `user item rating [timestamp]` per row.
///   csv    - comma separated, optional header row
///   tsv    - tab separated (MovieLens 100k u.data style), optional header
///   dcolon - "::" separated (MovieLens 1M ratings.dat style)
///   auto   - sniffed from the first data row
enum class FileFormat { auto_detect, csv, tsv, dcolon };

FileFormat parse_format_name(const std::string& name);
const char* format_name(FileFormat f);

/// Loads a rating file. Raw ids are remapped to dense 0-based indices in
/// sorted id order (numeric ids compare numerically), so the mapping does
/// not depend on row order and load -> export -> load is exact. Duplicate
/// (user,item) rows keep the last occurrence; a trailing timestamp field is
/// ignored. Throws IoError, ParseError (with line number) or ValidationError.
RatingMatrix load_ratings(const std::string& path, FileFormat format = FileFormat::auto_detect,
                          RatingDomain domain = {1, 5});

/// Writes the canonical interchange form: `user_id,item_id,rating` with a
/// header row, rows ordered by (user index, item index).
void write_canonical_csv(const RatingMatrix& m, const std::string& path);

} // namespace netcf

#endif
