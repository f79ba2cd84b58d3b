// Tries to open a TCP connection to 1.1.1.1:80; exits 0 only on success.
#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

int main() {
    int fd = socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return 2;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(80);
    inet_pton(AF_INET, "1.1.1.1", &addr.sin_addr);
    int rc = connect(fd, (sockaddr*)&addr, sizeof addr);
    close(fd);
    return rc == 0 ? 0 : 1;
}
