#include "threatwatch/corpus/post.hpp"

#include <fstream>

#include "threatwatch/common/error.hpp"

namespace threatwatch::corpus {

nlohmann::json to_json(const Post& post) {
  return {{"id", post.id}, {"author", post.author}, {"timestamp", format_rfc3339(post.timestamp)},
          {"text", post.text}};
}

Post post_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("post must be a JSON object");
  auto field = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ParseError(std::string("post field '") + key + "' missing or not a string");
    return it->get<std::string>();
  };
  Post post;
  post.id = field("id");
  if (post.id.empty()) throw ParseError("post id must be non-empty");
  post.author = j.contains("author") && j["author"].is_string() ? j["author"].get<std::string>() : "";
  post.timestamp = parse_rfc3339(field("timestamp"));
  post.text = field("text");
  return post;
}

void read_posts_jsonl(std::istream& in, const std::function<void(Post)>& on_post,
                      const std::function<void(const JsonlError&)>& on_error) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      on_post(post_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      on_error({number, e.what()});
    } catch (const Error& e) {
      on_error({number, e.what()});
    }
  }
}

std::vector<Post> read_posts_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<Post> posts;
  read_posts_jsonl(
      in, [&](Post p) { posts.push_back(std::move(p)); },
      [&](const JsonlError& e) {
        throw ParseError(path + ":" + std::to_string(e.line_number) + ": " + e.message);
      });
  return posts;
}

}  // namespace threatwatch::corpus
