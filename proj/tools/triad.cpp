#include <cstdio>

int main() {
    std::puts("triad: cli not wired yet");
    return 0;
}
