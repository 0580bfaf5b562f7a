#include "cfx/external.hpp"

#include "cfx/error.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace cfx {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string_view> split_spaces(std::string_view line, std::size_t max_parts) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < line.size() && parts.size() + 1 < max_parts) {
        const auto space = line.find(' ', pos);
        if (space == std::string_view::npos) break;
        parts.push_back(line.substr(pos, space - pos));
        pos = space + 1;
    }
    parts.push_back(line.substr(pos));
    return parts;
}

} // namespace

ExternalClient::ExternalClient(ExternalEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

ExternalClient::~ExternalClient() { shutdown(); }

std::string ExternalClient::format_request(const Entity& e) {
    std::string line = "CLASSIFY " + e.id + " ";
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (i) line += '|';
        line += e.values[i];
    }
    return line;
}

Label ExternalClient::parse_response(std::string_view line, std::string_view id) {
    const auto parts = split_spaces(line, 3);
    if (parts.size() == 3 && parts[0] == "ERR") {
        if (parts[1] != id)
            throw Error(ErrorKind::ExternalProtocolError, "ERR for id '" + std::string(parts[1]) + "'");
        throw Error(ErrorKind::ExternalProtocolError, "server error for '" + std::string(id) + "': " +
                                                          std::string(parts[2]));
    }
    if (parts.size() != 3 || parts[0] != "LABEL")
        throw Error(ErrorKind::ExternalProtocolError, "malformed response '" + std::string(line) + "'");
    if (parts[1] != id)
        throw Error(ErrorKind::ExternalProtocolError,
                    "response id '" + std::string(parts[1]) + "' does not match '" + std::string(id) + "'");
    if (parts[2] == "0") return Label::Zero;
    if (parts[2] == "1") return Label::One;
    throw Error(ErrorKind::ExternalBadLabel, "label '" + std::string(parts[2]) + "' is not 0 or 1");
}

void ExternalClient::launch() {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
        throw Error(ErrorKind::ExternalProtocolError, std::string("socketpair: ") + std::strerror(errno));
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw Error(ErrorKind::ExternalProtocolError, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0); // lets a timeout kill the shell and whatever it started
        ::dup2(fds[1], STDIN_FILENO);
        ::dup2(fds[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", endpoint_.command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(fds[1]);
    ::setpgid(pid, pid);
    fd_ = fds[0];
    pid_ = pid;

    send_line("HELLO cfx/1 " + std::to_string(endpoint_.arity));
    const auto reply = read_line();
    if (reply.rfind("OK ", 0) != 0 && reply != "OK") {
        broken_ = true;
        throw Error(ErrorKind::ExternalProtocolError, "bad handshake reply '" + reply + "'");
    }
    name_ = reply.size() > 3 ? reply.substr(3) : std::string();
}

void ExternalClient::shutdown() noexcept {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_WR);
        ::close(fd_);
        fd_ = -1;
    }
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 20; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) break;
            ::usleep(10'000);
        }
        kill_child();
    }
}

void ExternalClient::kill_child() noexcept {
    if (pid_ <= 0) return;
    ::kill(-pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void ExternalClient::send_line(const std::string& line) {
    const std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
        const auto n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            broken_ = true;
            throw Error(ErrorKind::ExternalProtocolError, std::string("write failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::string ExternalClient::read_line() {
    const auto deadline = Clock::now() + endpoint_.timeout;
    for (;;) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
        if (remaining <= 0) {
            broken_ = true;
            kill_child();
            throw Error(ErrorKind::ExternalTimeout,
                        "no response within " + std::to_string(endpoint_.timeout.count()) + " ms");
        }
        pollfd pfd{fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(remaining));
        if (ready < 0) {
            if (errno == EINTR) continue;
            broken_ = true;
            throw Error(ErrorKind::ExternalProtocolError, std::string("poll: ") + std::strerror(errno));
        }
        if (ready == 0) continue;
        char chunk[4096];
        const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            broken_ = true;
            throw Error(ErrorKind::ExternalProtocolError, "classifier process closed the channel");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

Label ExternalClient::classify(const Entity& e) {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(e.values); it != memo_.end()) return it->second;
    if (e.id.empty() || e.id.find_first_of(" \t\n|") != std::string::npos)
        throw Error(ErrorKind::ExternalProtocolError, "entity id '" + e.id + "' cannot be sent");
    if (broken_) throw Error(ErrorKind::ExternalProtocolError, "channel unusable after an earlier failure");
    if (fd_ < 0) launch();

    send_line(format_request(e));
    ++requests_;
    const auto line = read_line();
    Label label;
    try {
        label = parse_response(line, e.id);
    } catch (const Error&) {
        // A per-request ERR leaves the stream in sync; anything else does not.
        if (line.rfind("ERR ", 0) != 0) broken_ = true;
        throw;
    }
    memo_.emplace(e.values, label);
    return label;
}

std::size_t ExternalClient::requests_sent() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::string ExternalClient::server_name() const {
    std::lock_guard lock(mutex_);
    return name_;
}

} // namespace cfx
