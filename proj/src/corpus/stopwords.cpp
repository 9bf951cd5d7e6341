#include "threatwatch/corpus/stopwords.hpp"

#include "threatwatch/common/text_io.hpp"

namespace threatwatch::corpus {

StopwordList::StopwordList(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(to_lower_ascii(w));
}

StopwordList StopwordList::load(const std::filesystem::path& path) { return StopwordList(read_word_list(path)); }

StopwordList StopwordList::bundled() { return load(bundled_data_dir() / "stopwords.txt"); }

}  // namespace threatwatch::corpus
