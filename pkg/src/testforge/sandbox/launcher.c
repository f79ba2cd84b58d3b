/*
 * Resource-limited launcher used by testforge.sandbox.
 *
 * Forks one child, applies rlimits, optionally moves it into a fresh network
 * namespace, then polls /proc until it exits or breaks a limit. The report is
 * written as key=value lines to the --report path.
 *
 * The launcher forks from its own (small) address space so that ru_maxrss of
 * the child is not polluted by the RSS of the Python process that started us.
 */
#define _GNU_SOURCE
#include <errno.h>
#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/prctl.h>
#include <sys/resource.h>
#include <sys/time.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <time.h>
#include <unistd.h>

static long long now_us(void) {
    struct timespec ts;
    clock_gettime(CLOCK_MONOTONIC, &ts);
    return (long long)ts.tv_sec * 1000000LL + ts.tv_nsec / 1000;
}

static void die_usage(const char *msg) {
    fprintf(stderr, "launcher: %s\n", msg);
    exit(125);
}

/* utime+stime in clock ticks, or -1 */
static long long proc_cpu_ticks(pid_t pid) {
    char path[64], buf[1024];
    snprintf(path, sizeof path, "/proc/%d/stat", (int)pid);
    int fd = open(path, O_RDONLY);
    if (fd < 0) return -1;
    ssize_t n = read(fd, buf, sizeof buf - 1);
    close(fd);
    if (n <= 0) return -1;
    buf[n] = 0;
    char *p = strrchr(buf, ')');
    if (!p) return -1;
    /* fields after comm: state(3) ... utime(14) stime(15) */
    unsigned long long ut = 0, st = 0;
    int field = 2;
    for (char *tok = strtok(p + 1, " "); tok; tok = strtok(NULL, " ")) {
        field++;
        if (field == 14) ut = strtoull(tok, NULL, 10);
        if (field == 15) { st = strtoull(tok, NULL, 10); break; }
    }
    return (long long)(ut + st);
}

/* VmHWM in KiB, or -1 (process gone or not yet exec'd into an mm) */
static long long proc_hwm_kib(pid_t pid) {
    char path[64], buf[4096];
    snprintf(path, sizeof path, "/proc/%d/status", (int)pid);
    int fd = open(path, O_RDONLY);
    if (fd < 0) return -1;
    ssize_t n = read(fd, buf, sizeof buf - 1);
    close(fd);
    if (n <= 0) return -1;
    buf[n] = 0;
    char *p = strstr(buf, "VmHWM:");
    if (!p) return -1;
    return strtoll(p + 6, NULL, 10);
}

int main(int argc, char **argv) {
    const char *report = NULL, *in = NULL, *out = NULL, *err = NULL, *cwd = NULL;
    long long cpu_ms = 1000, wall_ms = 3000, mem_kib = 262144, as_kib = 0, fsize = 0;
    int no_net = 0;
    int i = 1;
    for (; i < argc; i++) {
        const char *a = argv[i];
        if (!strcmp(a, "--")) { i++; break; }
        if (i + 1 >= argc && strcmp(a, "--no-net")) die_usage("missing value");
        if (!strcmp(a, "--report")) report = argv[++i];
        else if (!strcmp(a, "--stdin")) in = argv[++i];
        else if (!strcmp(a, "--stdout")) out = argv[++i];
        else if (!strcmp(a, "--stderr")) err = argv[++i];
        else if (!strcmp(a, "--cwd")) cwd = argv[++i];
        else if (!strcmp(a, "--cpu-ms")) cpu_ms = atoll(argv[++i]);
        else if (!strcmp(a, "--wall-ms")) wall_ms = atoll(argv[++i]);
        else if (!strcmp(a, "--mem-kib")) mem_kib = atoll(argv[++i]);
        else if (!strcmp(a, "--as-kib")) as_kib = atoll(argv[++i]);
        else if (!strcmp(a, "--fsize")) fsize = atoll(argv[++i]);
        else if (!strcmp(a, "--no-net")) no_net = 1;
        else die_usage("unknown option");
    }
    if (!report || i >= argc) die_usage("need --report and a command");
    char **cmd = argv + i;

    int errpipe[2];
    if (pipe2(errpipe, O_CLOEXEC) < 0) { perror("pipe2"); return 125; }

    long long t0 = now_us();
    pid_t pid = fork();
    if (pid < 0) { perror("fork"); return 125; }
    if (pid == 0) {
        close(errpipe[0]);
        char stage[32] = "setup";
        setpgid(0, 0);
        prctl(PR_SET_PDEATHSIG, SIGKILL);
        if (no_net) {
            strcpy(stage, "unshare");
            if (unshare(CLONE_NEWNET) < 0 && unshare(CLONE_NEWUSER | CLONE_NEWNET) < 0) goto fail;
        }
        strcpy(stage, "redirect");
        if (in) {
            int fd = open(in, O_RDONLY);
            if (fd < 0 || dup2(fd, 0) < 0) goto fail;
            close(fd);
        } else {
            int fd = open("/dev/null", O_RDONLY);
            if (fd < 0 || dup2(fd, 0) < 0) goto fail;
            close(fd);
        }
        if (out) {
            int fd = open(out, O_WRONLY | O_CREAT | O_TRUNC, 0644);
            if (fd < 0 || dup2(fd, 1) < 0) goto fail;
            close(fd);
        }
        if (err) {
            int fd = open(err, O_WRONLY | O_CREAT | O_TRUNC, 0644);
            if (fd < 0 || dup2(fd, 2) < 0) goto fail;
            close(fd);
        }
        strcpy(stage, "chdir");
        if (cwd && chdir(cwd) < 0) goto fail;
        strcpy(stage, "rlimit");
        struct rlimit rl;
        rl.rlim_cur = (rlim_t)((cpu_ms + 999) / 1000 + 1);
        rl.rlim_max = rl.rlim_cur + 1;
        if (setrlimit(RLIMIT_CPU, &rl) < 0) goto fail;
        rl.rlim_cur = rl.rlim_max = 0;
        setrlimit(RLIMIT_CORE, &rl);
        if (fsize > 0) {
            rl.rlim_cur = rl.rlim_max = (rlim_t)fsize;
            if (setrlimit(RLIMIT_FSIZE, &rl) < 0) goto fail;
        }
        if (as_kib > 0) {
            rl.rlim_cur = rl.rlim_max = (rlim_t)as_kib * 1024;
            if (setrlimit(RLIMIT_AS, &rl) < 0) goto fail;
        }
        /* deep recursion is legal up to the memory limit */
        rl.rlim_cur = rl.rlim_max = (rlim_t)mem_kib * 1024;
        setrlimit(RLIMIT_STACK, &rl);
        strcpy(stage, "exec");
        execvp(cmd[0], cmd);
    fail:;
        int e = errno;
        char msg[96];
        int len = snprintf(msg, sizeof msg, "%s %d", stage, e);
        if (write(errpipe[1], msg, (size_t)len) < 0) { /* nothing to do */ }
        _exit(127);
    }
    close(errpipe[1]);

    int time_exceeded = 0, wall_exceeded = 0, memory_exceeded = 0;
    long long hwm = 0;
    long tick_ms = 1000 / sysconf(_SC_CLK_TCK);
    int status = 0;
    struct rusage ru;
    memset(&ru, 0, sizeof ru);
    struct timespec nap = {0, 2000000};
    for (;;) {
        pid_t r = wait4(pid, &status, WNOHANG, &ru);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) { perror("wait4"); break; }
        long long h = proc_hwm_kib(pid);
        if (h > hwm) hwm = h;
        long long ticks = proc_cpu_ticks(pid);
        long long wall = (now_us() - t0) / 1000;
        int kill_it = 0;
        if (hwm > mem_kib) { memory_exceeded = 1; kill_it = 1; }
        else if (ticks >= 0 && ticks * tick_ms > cpu_ms) { time_exceeded = 1; kill_it = 1; }
        else if (wall > wall_ms) { wall_exceeded = 1; kill_it = 1; }
        if (kill_it) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            while (wait4(pid, &status, 0, &ru) < 0 && errno == EINTR) {}
            break;
        }
        nanosleep(&nap, NULL);
    }
    long long wall_us = now_us() - t0;

    char setup_err[96] = {0};
    ssize_t n = read(errpipe[0], setup_err, sizeof setup_err - 1);
    if (n < 0) n = 0;
    setup_err[n] = 0;
    close(errpipe[0]);

    long long cpu_us = (long long)ru.ru_utime.tv_sec * 1000000LL + ru.ru_utime.tv_usec +
                       (long long)ru.ru_stime.tv_sec * 1000000LL + ru.ru_stime.tv_usec;
    long long peak = ru.ru_maxrss > hwm ? ru.ru_maxrss : hwm;
    int sig = WIFSIGNALED(status) ? WTERMSIG(status) : 0;
    if (sig == SIGXCPU) time_exceeded = 1;
    if (cpu_us / 1000 > cpu_ms) time_exceeded = 1;
    if (peak > mem_kib) memory_exceeded = 1;

    FILE *f = fopen(report, "w");
    if (!f) { perror("report"); return 125; }
    fprintf(f, "exited=%d\n", WIFEXITED(status) ? 1 : 0);
    fprintf(f, "code=%d\n", WIFEXITED(status) ? WEXITSTATUS(status) : -1);
    fprintf(f, "signal=%d\n", sig);
    fprintf(f, "cpu_us=%lld\n", cpu_us);
    fprintf(f, "wall_us=%lld\n", wall_us);
    fprintf(f, "peak_kib=%lld\n", peak);
    fprintf(f, "time_exceeded=%d\n", time_exceeded);
    fprintf(f, "wall_exceeded=%d\n", wall_exceeded);
    fprintf(f, "memory_exceeded=%d\n", memory_exceeded);
    fprintf(f, "setup_error=%s\n", setup_err);
    fclose(f);
    return 0;
}
