#include "dfadecomp/sat.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "dfadecomp/cdcl.hpp"
#include "dfadecomp/errors.hpp"

namespace dfadecomp::sat {

const char* status_name(Status status) {
    switch (status) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
    }
    return "unknown";
}

bool satisfies(const CnfInstance& instance, const std::vector<bool>& assignment) {
    for (const Clause& clause : instance.clauses) {
        bool ok = false;
        for (int lit : clause) {
            const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
            if (v >= assignment.size()) return false;
            if (assignment[v] == (lit > 0)) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

std::string to_dimacs(const CnfInstance& instance) {
    std::ostringstream out;
    if (!instance.meta.encoder.empty()) {
        out << "c encoder " << instance.meta.encoder << "\n";
        out << "c allocation";
        for (std::uint32_t m : instance.meta.allocation) out << ' ' << m;
        out << "\n";
        out << "c acceptor_states " << instance.meta.acceptor_states << "\n";
        out << "c symmetry " << (instance.meta.symmetry ? 1 : 0) << "\n";
    }
    out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << "\n";
    for (const Clause& clause : instance.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

CnfInstance parse_dimacs(const std::string& text) {
    CnfInstance instance;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    long declared_clauses = -1;
    Clause current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream header(line);
            std::string p, fmt;
            long vars = -1;
            long clauses = -1;
            if (!(header >> p >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 ||
                clauses < 0) {
                throw Error(ErrorCode::MalformedHeader, "bad DIMACS problem line: " + line);
            }
            if (header_seen) {
                throw Error(ErrorCode::MalformedHeader, "duplicate DIMACS problem line");
            }
            header_seen = true;
            instance.num_vars = static_cast<int>(vars);
            declared_clauses = clauses;
            continue;
        }
        if (!header_seen) {
            throw Error(ErrorCode::MalformedHeader, "clause before DIMACS problem line");
        }
        std::istringstream body(line);
        long lit = 0;
        while (body >> lit) {
            if (lit == 0) {
                instance.clauses.push_back(current);
                current.clear();
                continue;
            }
            const long v = lit > 0 ? lit : -lit;
            if (v > instance.num_vars) {
                throw Error(ErrorCode::MalformedInput,
                            "literal " + std::to_string(lit) + " exceeds declared variables");
            }
            current.push_back(static_cast<int>(lit));
        }
        if (!body.eof()) {
            throw Error(ErrorCode::MalformedInput, "non-integer token in clause line: " + line);
        }
    }
    if (!header_seen) throw Error(ErrorCode::EmptyInput, "no DIMACS problem line");
    if (!current.empty()) {
        throw Error(ErrorCode::MalformedInput, "unterminated final clause");
    }
    if (declared_clauses >= 0 &&
        instance.clauses.size() != static_cast<std::size_t>(declared_clauses)) {
        throw Error(ErrorCode::MalformedHeader,
                    "clause count mismatch: declared " + std::to_string(declared_clauses) +
                        ", found " + std::to_string(instance.clauses.size()));
    }
    return instance;
}

ParsedSolverOutput parse_solver_output(const std::string& output, int exit_code) {
    ParsedSolverOutput parsed;
    std::istringstream in(output);
    std::string line;
    bool status_seen = false;
    while (std::getline(in, line)) {
        if (line.size() >= 2 && line[0] == 's' && (line[1] == ' ' || line[1] == '\t')) {
            if (line.find("UNSATISFIABLE") != std::string::npos) {
                parsed.status = Status::Unsat;
                status_seen = true;
            } else if (line.find("SATISFIABLE") != std::string::npos) {
                parsed.status = Status::Sat;
                status_seen = true;
            } else if (line.find("UNKNOWN") != std::string::npos) {
                parsed.status = Status::Unknown;
                parsed.reason = "solver reported unknown";
                status_seen = true;
            }
            continue;
        }
        if (line.size() >= 2 && line[0] == 'v' && (line[1] == ' ' || line[1] == '\t')) {
            std::istringstream body(line.substr(1));
            long lit = 0;
            while (body >> lit) {
                if (lit == 0) continue;
                parsed.model_literals.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!status_seen) {
        if (exit_code == 10) {
            parsed.status = Status::Sat;
        } else if (exit_code == 20) {
            parsed.status = Status::Unsat;
        } else {
            parsed.status = Status::Unknown;
            parsed.reason = "no status line, exit code " + std::to_string(exit_code);
        }
    }
    return parsed;
}

namespace {

struct TempFile {
    std::string path;

    explicit TempFile(const std::string& contents) {
        char name[] = "/tmp/dfadecomp-XXXXXX";
        const int fd = mkstemp(name);
        if (fd < 0) {
            throw Error(ErrorCode::SolverUnusable, "cannot create temporary CNF file");
        }
        path = name;
        std::size_t written = 0;
        while (written < contents.size()) {
            const ssize_t n = write(fd, contents.data() + written, contents.size() - written);
            if (n < 0) {
                close(fd);
                unlink(name);
                throw Error(ErrorCode::SolverUnusable, "cannot write temporary CNF file");
            }
            written += static_cast<std::size_t>(n);
        }
        close(fd);
    }

    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    ~TempFile() { unlink(path.c_str()); }
};

struct ProcessResult {
    std::string output;
    int exit_code = -1;
    bool timed_out = false;
};

ProcessResult run_process(const std::string& command, std::optional<int> timeout_ms) {
    int fds[2];
    if (pipe(fds) != 0) {
        throw Error(ErrorCode::SolverUnusable, "pipe failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw Error(ErrorCode::SolverUnusable, "fork failed");
    }
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fds[1]);

    ProcessResult result;
    const auto start = std::chrono::steady_clock::now();
    std::string buffer(4096, '\0');
    bool open = true;
    while (open) {
        int wait_ms = -1;
        if (timeout_ms) {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
            wait_ms = static_cast<int>(*timeout_ms - elapsed);
            if (wait_ms <= 0) {
                result.timed_out = true;
                kill(pid, SIGKILL);
                break;
            }
        }
        pollfd pfd{fds[0], POLLIN, 0};
        const int ready = poll(&pfd, 1, wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        const ssize_t n = read(fds[0], buffer.data(), buffer.size());
        if (n <= 0) {
            open = false;
        } else {
            result.output.append(buffer.data(), static_cast<std::size_t>(n));
        }
    }
    close(fds[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

SatResult solve_builtin(const CnfInstance& instance, const SolverConfig& config) {
    SatResult result;
    result.solver_name = "builtin-cdcl";
    CdclSolver solver(instance.num_vars);
    for (const Clause& clause : instance.clauses) solver.add_clause(clause);
    std::optional<double> timeout;
    if (config.timeout_ms) timeout = static_cast<double>(*config.timeout_ms);
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = solver.solve(timeout);
    result.solve_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    switch (outcome) {
    case CdclSolver::Outcome::Sat: {
        result.assignment.assign(static_cast<std::size_t>(instance.num_vars) + 1, false);
        for (int v = 1; v <= instance.num_vars; ++v) {
            result.assignment[static_cast<std::size_t>(v)] = solver.value(v);
        }
        if (!satisfies(instance, result.assignment)) {
            throw Error(ErrorCode::InternalInconsistency,
                        "builtin solver returned a non-model");
        }
        result.status = Status::Sat;
        break;
    }
    case CdclSolver::Outcome::Unsat:
        result.status = Status::Unsat;
        break;
    case CdclSolver::Outcome::Interrupted:
        result.status = Status::Unknown;
        result.reason = "timeout";
        break;
    }
    return result;
}

SatResult solve_external(const CnfInstance& instance, const SolverConfig& config) {
    if (config.external_command.empty()) {
        throw Error(ErrorCode::SolverUnusable, "external solver command is empty");
    }
    SatResult result;
    result.solver_name = config.external_command;
    const TempFile cnf(to_dimacs(instance));
    const auto start = std::chrono::steady_clock::now();
    const ProcessResult run = run_process(config.external_command + " " + cnf.path,
                                          config.timeout_ms);
    result.solve_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    if (run.timed_out) {
        result.status = Status::Unknown;
        result.reason = "timeout";
        return result;
    }
    if (run.exit_code == 127) {
        throw Error(ErrorCode::SolverUnusable,
                    "cannot run external solver: " + config.external_command);
    }
    const ParsedSolverOutput parsed = parse_solver_output(run.output, run.exit_code);
    result.status = parsed.status;
    result.reason = parsed.reason;
    if (parsed.status == Status::Sat) {
        result.assignment.assign(static_cast<std::size_t>(instance.num_vars) + 1, false);
        for (int lit : parsed.model_literals) {
            const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
            if (v == 0 || v > static_cast<std::size_t>(instance.num_vars)) continue;
            result.assignment[v] = lit > 0;
        }
        if (!satisfies(instance, result.assignment)) {
            throw Error(ErrorCode::MalformedModel,
                        "external solver claimed sat but the model fails a clause");
        }
    }
    return result;
}

} // namespace

SatResult solve(const CnfInstance& instance, const SolverConfig& config) {
    if (config.mode == SolverConfig::Mode::builtin) return solve_builtin(instance, config);
    return solve_external(instance, config);
}

} // namespace dfadecomp::sat
