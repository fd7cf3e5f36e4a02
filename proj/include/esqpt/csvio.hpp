#ifndef ESQPT_CSVIO_HPP
#define ESQPT_CSVIO_HPP

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace esqpt {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// CSV emitter with a '#'-prefixed metadata header. All doubles are printed
/// with %.12g so identical runs produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& line);
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void meta(const std::string& key, long long value);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

  static std::string format(double v);
  static std::string format(int v);
  static std::string format(long long v);

 private:
  std::ofstream out_;
};

}  // namespace esqpt

#endif
