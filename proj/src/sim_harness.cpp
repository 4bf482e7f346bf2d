#include "chiraag/sim_harness.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <filesystem>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace chiraag {

// ---------------------------------------------------------------------------
// Workspace composition

std::string compose_workspace(const DesignBundle& bundle, const AssertionSuite& suite,
                              const std::string& bind_template_path,
                              const std::string& workspace_dir) {
    if (!fs::exists(bind_template_path)) {
        throw BindTemplateMissing(bind_template_path);
    }
    const std::string bind_template = read_file(bind_template_path);

    std::error_code ec;
    if (fs::exists(workspace_dir)) {
        throw IoFailure("workspace directory already exists", workspace_dir);
    }
    fs::create_directories(fs::path(workspace_dir) / "rtl", ec);
    fs::create_directories(fs::path(workspace_dir) / "tb", ec);
    if (ec) {
        throw IoFailure("cannot create workspace", workspace_dir);
    }

    for (const std::string& src : bundle.design_files) {
        const std::string content = read_file(src);
        write_file((fs::path(workspace_dir) / "rtl" / fs::path(src).filename()).string(),
                   content);
    }
    {
        const std::string content = read_file(bundle.testbench_file);
        write_file((fs::path(workspace_dir) / "tb" /
                    fs::path(bundle.testbench_file).filename())
                       .string(),
                   content);
    }

    std::string rendered = replace_all(bind_template, "{{top}}", bundle.top_module);
    rendered = replace_all(rendered, "{{assertions}}", render_sva_file(suite));
    write_file((fs::path(workspace_dir) / "generated_assertions.sv").string(), rendered);
    return workspace_dir;
}

// ---------------------------------------------------------------------------
// External adapter

namespace {

struct CommandResult {
    std::string output;
    int exit_code = 0;      // 128+signal when signal-terminated
    bool signaled = false;
    bool timed_out = false;
};

// Spawns argv in its own process group with stdout+stderr captured through a
// single pipe (order-preserving). On deadline the whole group gets SIGTERM,
// then SIGKILL after a 2 s grace period.
CommandResult run_command(const std::vector<std::string>& argv, const std::string& cwd,
                          std::chrono::steady_clock::time_point deadline) {
    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw ChiraagError("pipe creation failed");
    }
    // the exec-errno channel must vanish on a successful exec
    fcntl(err_pipe[0], F_SETFD, FD_CLOEXEC);
    fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

    const pid_t pid = fork();
    if (pid < 0) {
        throw ChiraagError("fork failed");
    }
    if (pid == 0) {
        setpgid(0, 0);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(126);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(out_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        const int err = errno;
        [[maybe_unused]] ssize_t n = write(err_pipe[1], &err, sizeof(err));
        _exit(127);
    }

    setpgid(pid, pid); // belt and braces against the fork/exec race
    close(out_pipe[1]);
    close(err_pipe[1]);

    // did exec fail?
    int exec_errno = 0;
    {
        ssize_t n = read(err_pipe[0], &exec_errno, sizeof(exec_errno));
        close(err_pipe[0]);
        if (n == static_cast<ssize_t>(sizeof(exec_errno))) {
            close(out_pipe[0]);
            int status = 0;
            waitpid(pid, &status, 0);
            if (exec_errno == ENOENT) {
                throw SimulatorNotFound("simulator command not found: " + argv[0]);
            }
            throw ChiraagError("cannot execute " + argv[0] + ": " +
                               std::strerror(exec_errno));
        }
    }

    CommandResult result;
    bool killed = false;
    char buffer[4096];
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        if (!killed && now >= deadline) {
            kill(-pid, SIGTERM);
            killed = true;
            result.timed_out = true;
            // grace period before escalating
            const auto grace_end = now + std::chrono::seconds(2);
            while (std::chrono::steady_clock::now() < grace_end) {
                struct pollfd pfd{out_pipe[0], POLLIN, 0};
                if (poll(&pfd, 1, 50) > 0) {
                    const ssize_t n = read(out_pipe[0], buffer, sizeof(buffer));
                    if (n <= 0) break;
                    result.output.append(buffer, static_cast<std::size_t>(n));
                    continue;
                }
                int status = 0;
                if (waitpid(pid, &status, WNOHANG) == pid) {
                    close(out_pipe[0]);
                    return result;
                }
            }
            kill(-pid, SIGKILL);
            break;
        }

        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        struct pollfd pfd{out_pipe[0], POLLIN, 0};
        const int rc = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 200)));
        if (rc > 0) {
            const ssize_t n = read(out_pipe[0], buffer, sizeof(buffer));
            if (n == 0) break; // EOF: all writers exited
            if (n < 0) {
                if (errno == EINTR) continue;
                break;
            }
            result.output.append(buffer, static_cast<std::size_t>(n));
        }
    }
    close(out_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFSIGNALED(status)) {
        result.signaled = true;
        result.exit_code = 128 + WTERMSIG(status);
    } else if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    return result;
}

std::vector<std::string> render_cmd(const std::vector<std::string>& cmd,
                                    const std::string& workspace, const std::string& top) {
    std::vector<std::string> out;
    out.reserve(cmd.size());
    for (const std::string& arg : cmd) {
        std::string rendered = replace_all(arg, "{{workspace}}", workspace);
        out.push_back(replace_all(rendered, "{{top}}", top));
    }
    return out;
}

void append_phase(std::string& raw_text, const char* phase, const std::string& output) {
    if (output.empty()) return;
    raw_text += "### PHASE: ";
    raw_text += phase;
    raw_text += "\n";
    raw_text += output;
    if (raw_text.back() != '\n') raw_text += "\n";
}

} // namespace

ExternalAdapter::ExternalAdapter(std::vector<std::string> compile_cmd,
                                 std::vector<std::string> run_cmd, std::string identity)
    : compile_cmd_(std::move(compile_cmd)),
      run_cmd_(std::move(run_cmd)),
      identity_(std::move(identity)) {
    if (run_cmd_.empty()) {
        throw ConfigError("adapter.run_cmd must not be empty");
    }
}

std::string ExternalAdapter::identity() const { return identity_; }

SimulationLog ExternalAdapter::run(const std::string& workspace,
                                   const std::string& top_module,
                                   std::chrono::milliseconds timeout,
                                   std::uint32_t /*iteration*/) const {
    const auto start = std::chrono::steady_clock::now();
    const auto deadline = start + timeout;

    SimulationLog log;
    bool crashed = false;

    if (!compile_cmd_.empty()) {
        CommandResult compiled =
            run_command(render_cmd(compile_cmd_, workspace, top_module), workspace, deadline);
        append_phase(log.raw_text, "compile", compiled.output);
        if (compiled.timed_out) {
            throw SimulationTimeout("simulator timed out during compile", log.raw_text);
        }
        log.exit_code = compiled.exit_code;
        crashed = compiled.signaled;
        if (compiled.exit_code != 0) {
            // compile failed; the run phase is pointless
            log.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start);
            if (crashed && log.raw_text.empty()) {
                throw CrashWithoutOutput("simulator compile step died on signal " +
                                         std::to_string(compiled.exit_code - 128) +
                                         " without producing output");
            }
            return log;
        }
    }

    CommandResult ran =
        run_command(render_cmd(run_cmd_, workspace, top_module), workspace, deadline);
    append_phase(log.raw_text, "run", ran.output);
    if (ran.timed_out) {
        throw SimulationTimeout("simulator timed out during run", log.raw_text);
    }
    log.exit_code = ran.exit_code;
    log.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (ran.signaled && log.raw_text.empty()) {
        throw CrashWithoutOutput("simulator died on signal " +
                                 std::to_string(ran.exit_code - 128) +
                                 " without producing output");
    }
    return log;
}

// ---------------------------------------------------------------------------
// Replay adapter

ReplayAdapter::ReplayAdapter(std::string replay_dir) : replay_dir_(std::move(replay_dir)) {}

std::string ReplayAdapter::identity() const { return "replay"; }

SimulationLog ReplayAdapter::run(const std::string& /*workspace*/,
                                 const std::string& /*top_module*/,
                                 std::chrono::milliseconds /*timeout*/,
                                 std::uint32_t iteration) const {
    const auto start = std::chrono::steady_clock::now();
    const std::string base =
        (fs::path(replay_dir_) / ("iter" + std::to_string(iteration))).string();

    SimulationLog log;
    log.raw_text = read_file(base + ".log");
    if (fs::exists(base + ".exit")) {
        try {
            log.exit_code = std::stoi(trim(read_file(base + ".exit")));
        } catch (const std::exception&) {
            throw ConfigError("replay exit sidecar is not an integer: " + base + ".exit");
        }
    }
    log.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return log;
}

// ---------------------------------------------------------------------------

SimulationLog run_simulation(const std::string& workspace, const SimulatorAdapter& adapter,
                             const std::string& top_module,
                             std::chrono::milliseconds timeout, std::uint32_t iteration) {
    try {
        SimulationLog log = adapter.run(workspace, top_module, timeout, iteration);
        write_file((fs::path(workspace) / "sim.log").string(), log.raw_text);
        return log;
    } catch (const SimulationTimeout& e) {
        write_file((fs::path(workspace) / "sim.log").string(), e.partial_output);
        throw;
    }
}

std::optional<SimTime> report_sim_time(const SimulationLog& log, const PatternPack& pack) {
    return extract_sim_time(log.raw_text, pack);
}

} // namespace chiraag
