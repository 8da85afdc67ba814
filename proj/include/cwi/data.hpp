#ifndef CWI_DATA_HPP
#define CWI_DATA_HPP

// Typed view of CWI shared-task style TSV corpora: one annotated target span
// (single word or multi-word expression) per line, sentence text repeated on
// every line.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace cwi {

enum class Language { EN, ES, DE, FR };
enum class Genre { News, WikiNews, Wikipedia, None };
enum class Split { Train, Dev, Test };
enum class Label { NonComplex = 0, Complex = 1 };

std::string to_string(Language v);
std::string to_string(Genre v);
std::string to_string(Split v);
Language language_from_string(const std::string& s);
Genre genre_from_string(const std::string& s);
Split split_from_string(const std::string& s);

struct Instance {
  std::string id;
  std::string sentence;
  std::size_t start = 0;  // character offset, inclusive
  std::size_t end = 0;    // character offset, exclusive
  std::string target;
  Label label = Label::NonComplex;
  Language language = Language::EN;
  Genre genre = Genre::None;

  bool operator==(const Instance&) const = default;
};

// Column layout of the source TSV. Default matches the shared-task layout of
// 11 tab-separated columns (id 0, sentence 1, start 2, end 3, target 4,
// binary label 9); override for other layouts.
struct ColumnMap {
  std::size_t id = 0;
  std::size_t sentence = 1;
  std::size_t start = 2;
  std::size_t end = 3;
  std::size_t target = 4;
  std::size_t binary_label = 9;
  std::size_t expected_columns = 11;

  // Indices must be distinct and below expected_columns.
  bool valid() const;
};

struct Dataset {
  std::vector<Instance> instances;
  Language language = Language::EN;
  Genre genre = Genre::None;
  Split split = Split::Train;

  bool operator==(const Dataset&) const = default;
};

// Parses one instance per line, validating that sentence[start..end) equals
// the target byte-for-byte on the decoded text. Throws ParseError with the
// line number (and instance id where known) on malformed input.
Dataset parse_dataset(std::istream& in, const ColumnMap& columns,
                      Language language, Genre genre, Split split,
                      bool skip_header = false);

Dataset load_dataset(const std::string& path, const ColumnMap& columns,
                     Language language, Genre genre, Split split,
                     bool skip_header = false);

// Canonical TSV re-serialization with the same column map. Unmapped columns
// are filled with "-".
void write_dataset(std::ostream& out, const Dataset& dataset,
                   const ColumnMap& columns);

// True iff the default tokenizer splits the target into >= 2 tokens.
bool is_mwe(const Instance& instance);

// All other instances sharing the exact sentence string whose span is a
// proper sub-span of this instance's span, in corpus order.
std::vector<Instance> subwords_of(const Dataset& dataset,
                                  const Instance& instance);

// Sentence-keyed index for repeated sub-span queries over one dataset.
class SubwordIndex {
public:
  explicit SubwordIndex(const Dataset& dataset);

  // Indices into dataset.instances, corpus order.
  std::vector<std::size_t> subwords_of(std::size_t instance_idx) const;

private:
  const Dataset* dataset_;
  // sentence -> instance indices, corpus order
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;  // instance -> group id
};

}  // namespace cwi

#endif  // CWI_DATA_HPP
