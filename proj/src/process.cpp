#include "guirepair/process.hpp"

#include <boost/asio.hpp>
#include <boost/process.hpp>

#include <future>

#include "guirepair/error.hpp"

namespace bp = boost::process;

namespace guirepair {

ProcessResult run_process(const std::vector<std::string>& argv, const fs::path& cwd,
                          const std::string& input, std::chrono::milliseconds timeout) {
  if (argv.empty()) throw Error(ErrorCode::InvalidArgument, "empty command line");
  boost::filesystem::path exe = argv[0];
  if (argv[0].find('/') == std::string::npos) {
    exe = bp::search_path(argv[0]);
    if (exe.empty()) throw Error(ErrorCode::IoError, "program not found: " + argv[0]);
  }
  std::vector<std::string> args(argv.begin() + 1, argv.end());
  boost::asio::io_context ios;
  std::future<std::string> out;
  std::future<std::string> err;
  ProcessResult result;
  try {
    bp::child child(exe, bp::args = args, bp::start_dir = cwd.string(),
                    bp::std_in < boost::asio::buffer(input), bp::std_out > out, bp::std_err > err,
                    ios);
    ios.run_for(timeout);
    if (!ios.stopped() || child.running()) {
      std::error_code ec;
      if (child.running()) {
        child.wait_for(std::chrono::milliseconds(50), ec);
      }
      if (child.running(ec)) {
        child.terminate(ec);
        result.timed_out = true;
      }
      ios.run_for(std::chrono::milliseconds(200));
    }
    child.wait();
    result.exit_code = result.timed_out ? -1 : child.exit_code();
  } catch (const bp::process_error& e) {
    throw Error(ErrorCode::IoError, "cannot run " + argv[0] + ": " + e.what());
  }
  auto grab = [](std::future<std::string>& f) {
    if (f.valid() && f.wait_for(std::chrono::seconds(0)) == std::future_status::ready) return f.get();
    return std::string();
  };
  result.out = grab(out);
  result.err = grab(err);
  return result;
}

ProcessResult run_shell(const std::string& command, const fs::path& cwd,
                        std::chrono::milliseconds timeout) {
  return run_process({"/bin/sh", "-c", command}, cwd, "", timeout);
}

}  // namespace guirepair
