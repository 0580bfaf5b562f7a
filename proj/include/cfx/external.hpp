#pragma once

// Line-oriented client for a black-box classifier running as a child process.
//
//   -> HELLO cfx/1 <arity>           <- OK <name>
//   -> CLASSIFY <id> <v1>|...|<vn>   <- LABEL <id> <0|1>  |  ERR <id> <message>
//
// Requests are serialized over the single channel; answers are memoized per
// value tuple so the process sees each tuple at most once.

#include "cfx/classifiers.hpp"

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace cfx {

class ExternalClient {
public:
    explicit ExternalClient(ExternalEndpoint endpoint);
    ~ExternalClient();

    ExternalClient(const ExternalClient&) = delete;
    ExternalClient& operator=(const ExternalClient&) = delete;

    /// Launches the process and performs the handshake on first use.
    Label classify(const Entity& e);

    [[nodiscard]] std::size_t requests_sent() const;
    [[nodiscard]] std::string server_name() const;

    /// Formats a request line (without the trailing newline).
    static std::string format_request(const Entity& e);
    /// Parses a response line for `id`; throws ExternalProtocolError / ExternalBadLabel.
    static Label parse_response(std::string_view line, std::string_view id);

private:
    void launch();
    void shutdown() noexcept;
    void kill_child() noexcept;
    void send_line(const std::string& line);
    std::string read_line();

    ExternalEndpoint endpoint_;
    mutable std::mutex mutex_;
    std::map<std::vector<Value>, Label> memo_;
    std::size_t requests_ = 0;
    std::string name_;
    std::string buffer_;
    int fd_ = -1;
    int pid_ = -1;
    bool broken_ = false;
};

} // namespace cfx
