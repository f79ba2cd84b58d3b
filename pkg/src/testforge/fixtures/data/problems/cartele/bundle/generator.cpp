// usage: gen <C> <n> <mode> <tag>
//   mode: random   mixed entries and exits, small time steps
//         burst    many entries sharing a timestamp
//         boys     only boys' events
//         longopen random prefix, then one boy stays inside until the last entry
//         sample   the short log from the statement (n is ignored)
#include "testlib.h"
#include <iostream>
#include <string>
#include <vector>
using namespace std;

const int DAY = 86400;

void print(int c, const vector<string>& who, const vector<char>& dir, const vector<int>& t) {
    cout << c << " " << t.size() << "\n";
    for (size_t i = 0; i < t.size(); i++)
        cout << who[i] << " " << dir[i] << " " << t[i] / 3600 << " " << t[i] / 60 % 60 << " " << t[i] % 60 << "\n";
}

int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    int c = atoi(argv[1]);
    int n = atoi(argv[2]);
    string mode = argv[3];

    vector<string> who;
    vector<char> dir;
    vector<int> t;
    if (mode == "sample") {
        const char* g = "bfbfbfff";
        const char* d = "iieeieii";
        int s[] = {628, 630, 633, 640, 641, 648, 658, 664};
        for (int i = 0; i < 8; i++) who.push_back(string(1, g[i])), dir.push_back(d[i]), t.push_back(s[i]);
        print(c, who, dir, t);
        return 0;
    }
    int maxStep = max(1, (DAY - 1) / max(1, n));
    int now = rnd.next(0, 3600);
    int prefix = mode == "longopen" ? n / 2 : n;
    for (int i = 0; i < n; i++) {
        if (mode == "burst") now += rnd.next(0, 9) == 0 ? 1 : 0;
        else now += rnd.next(0, min(maxStep, 5));
        if (now >= DAY) now = DAY - 1;
        string g = (mode == "boys" || rnd.next(2) == 0) ? "b" : "f";
        char e = rnd.next(3) == 0 ? 'e' : 'i';
        if (mode == "longopen" && i >= prefix) {
            if (i == prefix) g = "b", e = 'i';
            else g = "f";
        }
        who.push_back(g), dir.push_back(e), t.push_back(now);
    }
    if (mode == "longopen") {
        // if an odd stretch is already open it simply stays open to the end
        int boys = 0;
        for (int i = 0; i < prefix; i++)
            if (who[i] == "b") boys = dir[i] == 'i' ? boys + 1 : max(0, boys - 1);
        if (boys % 2 == 1) who[prefix] = "f";
        t.back() = DAY - 1;
    }
    print(c, who, dir, t);
    return 0;
}
