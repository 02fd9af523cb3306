#pragma once

#include <sys/types.h>

#include <string>
#include <string_view>

namespace pixelprobe::detail {

/// `/bin/sh -c command` with piped stdin/stdout; stderr is inherited.
/// The destructor closes stdin, waits briefly for a clean exit, then kills.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Throws ScorerProtocolError when the child has gone away.
  void write_all(std::string_view data);
  /// Reads through the next '\n' (excluded). Throws ScorerProtocolError on EOF.
  std::string read_line();

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace pixelprobe::detail
