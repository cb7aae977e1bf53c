#pragma once

#include <stdexcept>
#include <string>

namespace hcolor {

/// A file that cannot be read or written as the expected format.
/// what() is "<path>: <reason>".
class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(const std::string& path, const std::string& reason)
      : std::runtime_error(path + ": " + reason), path_(path), reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

}  // namespace hcolor
