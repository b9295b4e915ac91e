#include "sphereiso/subprocess.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

#include "sphereiso/json_io.hpp"

namespace sphereiso {

namespace {

struct Child {
  pid_t pid{-1};
  FILE* to_child{nullptr};
  FILE* from_child{nullptr};

  explicit Child(const std::vector<std::string>& argv) {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
      throw std::runtime_error("pipe() failed");
    pid = fork();
    if (pid < 0) throw std::runtime_error("fork() failed");
    if (pid == 0) {
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child = fdopen(in_pipe[1], "w");
    from_child = fdopen(out_pipe[0], "r");
  }

  ~Child() {
    if (to_child) fclose(to_child);
    if (from_child) fclose(from_child);
    if (pid > 0) waitpid(pid, nullptr, 0);
  }

  std::string round_trip(const std::string& line) {
    fputs(line.c_str(), to_child);
    fputc('\n', to_child);
    fflush(to_child);
    std::string out;
    int c;
    while ((c = fgetc(from_child)) != EOF && c != '\n') out.push_back((char)c);
    if (out.empty() && c == EOF)
      throw PreconditionError("oracle subprocess closed its output");
    return out;
  }
};

}  // namespace

SphereMapOracle subprocess_oracle(const FiniteMeasureSpace& dom,
                                  const FiniteMeasureSpace& cod, double p,
                                  std::vector<std::string> argv) {
  auto child = std::make_shared<Child>(argv);
  SphereMapOracle o;
  o.dom = dom;
  o.cod = cod;
  o.p = p;
  o.fn = [child, cod](const SphereVector& f) {
    std::string reply = child->round_trip(vector_to_json(f.vec).dump());
    return vector_from_json(cod, json::parse(reply));
  };
  return o;
}

}  // namespace sphereiso
