/*
 * Reference implementations used to generate the frozen vectors in
 * tests/cipher_vectors.rs. Straight transcriptions of the designers'
 * published C listings (TEA, XTEA, corrected block TEA, RC6) and of the
 * NIST SKIPJACK description. Build and run:
 *
 *     cc -O2 -o ref_ciphers ref_ciphers.c && ./ref_ciphers
 *
 * Byte conventions match the crate: TEA family packs blocks and keys as
 * big-endian 32-bit words; RC6 is little-endian as in its specification.
 */
#include <stdio.h>
#include <stdint.h>
#include <string.h>

/* ---- TEA (Wheeler & Needham 1994) ---- */
static void tea_code(uint32_t *v, const uint32_t *k) {
    uint32_t y = v[0], z = v[1], sum = 0, delta = 0x9e3779b9, n = 32;
    while (n-- > 0) {
        sum += delta;
        y += ((z << 4) + k[0]) ^ (z + sum) ^ ((z >> 5) + k[1]);
        z += ((y << 4) + k[2]) ^ (y + sum) ^ ((y >> 5) + k[3]);
    }
    v[0] = y; v[1] = z;
}

/* ---- XTEA (Needham & Wheeler 1997) ---- */
static void xtea_encipher(uint32_t *v, const uint32_t *k) {
    uint32_t y = v[0], z = v[1], sum = 0, delta = 0x9E3779B9, n = 32;
    while (n-- > 0) {
        y += (z << 4 ^ z >> 5) + z ^ sum + k[sum & 3];
        sum += delta;
        z += (y << 4 ^ y >> 5) + y ^ sum + k[sum >> 11 & 3];
    }
    v[0] = y; v[1] = z;
}

/* ---- Corrected block TEA (Wheeler & Needham 1998) ---- */
#define MX ((z >> 5 ^ y << 2) + (y >> 3 ^ z << 4) ^ (sum ^ y) + (k[p & 3 ^ e] ^ z))
static long btea(uint32_t *v, long n, const uint32_t *k) {
    uint32_t z = v[n - 1], y = v[0], sum = 0, e, DELTA = 0x9e3779b9;
    long p, q;
    if (n > 1) {
        q = 6 + 52 / n;
        while (q-- > 0) {
            sum += DELTA;
            e = (sum >> 2) & 3;
            for (p = 0; p < n - 1; p++) y = v[p + 1], z = v[p] += MX;
            y = v[0];
            z = v[n - 1] += MX;
        }
        return 0;
    } else if (n < -1) {
        n = -n;
        q = 6 + 52 / n;
        sum = q * DELTA;
        while (sum != 0) {
            e = (sum >> 2) & 3;
            for (p = n - 1; p > 0; p--) z = v[p - 1], y = v[p] -= MX;
            z = v[n - 1];
            y = v[0] -= MX;
            sum -= DELTA;
        }
        return 0;
    }
    return 1;
}

/* ---- RC6-32/20/16 (Rivest, Robshaw, Sidney, Yin) ---- */
#define ROTL(x, y) (((x) << ((y) & 31)) | ((x) >> (32 - ((y) & 31))))
static void rc6_key_setup(uint32_t *S, const unsigned char *key, int b) {
    uint32_t L[8], A, B;
    int i, j, s, c = (b + 3) / 4, v;
    memset(L, 0, sizeof L);
    for (i = b - 1; i >= 0; i--) L[i / 4] = (L[i / 4] << 8) + key[i];
    S[0] = 0xB7E15163;
    for (i = 1; i < 44; i++) S[i] = S[i - 1] + 0x9E3779B9;
    A = B = 0; i = j = 0;
    v = 3 * (44 > c ? 44 : c);
    for (s = 1; s <= v; s++) {
        A = S[i] = ROTL(S[i] + A + B, 3);
        B = L[j] = ROTL(L[j] + A + B, A + B);
        i = (i + 1) % 44;
        j = (j + 1) % c;
    }
}
static void rc6_encrypt(const uint32_t *S, uint32_t *pt) {
    uint32_t A = pt[0], B = pt[1], C = pt[2], D = pt[3], t, u, x;
    int i;
    B += S[0]; D += S[1];
    for (i = 2; i <= 40; i += 2) {
        t = ROTL(B * (2 * B + 1), 5);
        u = ROTL(D * (2 * D + 1), 5);
        A = ROTL(A ^ t, u) + S[i];
        C = ROTL(C ^ u, t) + S[i + 1];
        x = A; A = B; B = C; C = D; D = x;
    }
    A += S[42]; C += S[43];
    pt[0] = A; pt[1] = B; pt[2] = C; pt[3] = D;
}

/* ---- SKIPJACK (NIST, 1998) ---- */
static const unsigned char ftable[256] = {
0xa3,0xd7,0x09,0x83,0xf8,0x48,0xf6,0xf4,0xb3,0x21,0x15,0x78,0x99,0xb1,0xaf,0xf9,
0xe7,0x2d,0x4d,0x8a,0xce,0x4c,0xca,0x2e,0x52,0x95,0xd9,0x1e,0x4e,0x38,0x44,0x28,
0x0a,0xdf,0x02,0xa0,0x17,0xf1,0x60,0x68,0x12,0xb7,0x7a,0xc3,0xe9,0xfa,0x3d,0x53,
0x96,0x84,0x6b,0xba,0xf2,0x63,0x9a,0x19,0x7c,0xae,0xe5,0xf5,0xf7,0x16,0x6a,0xa2,
0x39,0xb6,0x7b,0x0f,0xc1,0x93,0x81,0x1b,0xee,0xb4,0x1a,0xea,0xd0,0x91,0x2f,0xb8,
0x55,0xb9,0xda,0x85,0x3f,0x41,0xbf,0xe0,0x5a,0x58,0x80,0x5f,0x66,0x0b,0xd8,0x90,
0x35,0xd5,0xc0,0xa7,0x33,0x06,0x65,0x69,0x45,0x00,0x94,0x56,0x6d,0x98,0x9b,0x76,
0x97,0xfc,0xb2,0xc2,0xb0,0xfe,0xdb,0x20,0xe1,0xeb,0xd6,0xe4,0xdd,0x47,0x4a,0x1d,
0x42,0xed,0x9e,0x6e,0x49,0x3c,0xcd,0x43,0x27,0xd2,0x07,0xd4,0xde,0xc7,0x67,0x18,
0x89,0xcb,0x30,0x1f,0x8d,0xc6,0x8f,0xaa,0xc8,0x74,0xdc,0xc9,0x5d,0x5c,0x31,0xa4,
0x70,0x88,0x61,0x2c,0x9f,0x0d,0x2b,0x87,0x50,0x82,0x54,0x64,0x26,0x7d,0x03,0x40,
0x34,0x4b,0x1c,0x73,0xd1,0xc4,0xfd,0x3b,0xcc,0xfb,0x7f,0xab,0xe6,0x3e,0x5b,0xa5,
0xad,0x04,0x23,0x9c,0x14,0x51,0x22,0xf0,0x29,0x79,0x71,0x7e,0xff,0x8c,0x0e,0xe2,
0x0c,0xef,0xbc,0x72,0x75,0x6f,0x37,0xa1,0xec,0xd3,0x8e,0x62,0x8b,0x86,0x10,0xe8,
0x08,0x77,0x11,0xbe,0x92,0x4f,0x24,0xc5,0x32,0x36,0x9d,0xcf,0xf3,0xa6,0xbb,0xac,
0x5e,0x6c,0xa9,0x13,0x57,0x25,0xb5,0xe3,0xbd,0xa8,0x3a,0x01,0x05,0x59,0x2a,0x46};

static uint16_t sj_g(uint16_t w, int step, const unsigned char *key) {
    unsigned char g1 = w >> 8, g2 = w & 0xff, g3, g4, g5, g6;
    g3 = ftable[g2 ^ key[(4 * step) % 10]] ^ g1;
    g4 = ftable[g3 ^ key[(4 * step + 1) % 10]] ^ g2;
    g5 = ftable[g4 ^ key[(4 * step + 2) % 10]] ^ g3;
    g6 = ftable[g5 ^ key[(4 * step + 3) % 10]] ^ g4;
    return (uint16_t)((g5 << 8) | g6);
}
static void skipjack_encrypt(const unsigned char *key, unsigned char *blk) {
    uint16_t w[4], t;
    int k, i;
    for (i = 0; i < 4; i++) w[i] = (uint16_t)((blk[2 * i] << 8) | blk[2 * i + 1]);
    for (k = 1; k <= 32; k++) {
        uint16_t g = sj_g(w[0], k - 1, key);
        if ((k >= 1 && k <= 8) || (k >= 17 && k <= 24)) {
            /* rule A */
            t = g ^ w[3] ^ (uint16_t)k;
            w[3] = w[2]; w[2] = w[1]; w[1] = g; w[0] = t;
        } else {
            /* rule B */
            t = w[0] ^ w[1] ^ (uint16_t)k;
            w[1] = g; w[0] = w[3]; w[3] = w[2]; w[2] = t;
        }
    }
    for (i = 0; i < 4; i++) { blk[2 * i] = w[i] >> 8; blk[2 * i + 1] = w[i] & 0xff; }
}

/* ---- helpers ---- */
static uint64_t lcg_state = 0x0123456789abcdefULL;
static unsigned char next_byte(void) {
    lcg_state = lcg_state * 6364136223846793005ULL + 1442695040888963407ULL;
    return (unsigned char)(lcg_state >> 56);
}
static void fill(unsigned char *b, int n) { for (int i = 0; i < n; i++) b[i] = next_byte(); }
static void hex(const unsigned char *b, int n) { for (int i = 0; i < n; i++) printf("%02x", b[i]); }
static uint32_t be32(const unsigned char *b) {
    return ((uint32_t)b[0] << 24) | ((uint32_t)b[1] << 16) | ((uint32_t)b[2] << 8) | b[3];
}
static void put_be32(unsigned char *b, uint32_t v) {
    b[0] = v >> 24; b[1] = v >> 16; b[2] = v >> 8; b[3] = v;
}
static uint32_t le32(const unsigned char *b) {
    return ((uint32_t)b[3] << 24) | ((uint32_t)b[2] << 16) | ((uint32_t)b[1] << 8) | b[0];
}
static void put_le32(unsigned char *b, uint32_t v) {
    b[0] = v; b[1] = v >> 8; b[2] = v >> 16; b[3] = v >> 24;
}

#define VECTORS 12

static void emit(const char *name, const unsigned char *key, int kl,
                 const unsigned char *pt, const unsigned char *ct, int bl) {
    printf("%s ", name); hex(key, kl); printf(" "); hex(pt, bl); printf(" "); hex(ct, bl); printf("\n");
}

int main(void) {
    unsigned char key[16], pt[16], ct[16];
    uint32_t k[4], v[4], S[44];
    int i, j;

    for (i = 0; i < VECTORS; i++) {
        if (i == 0) { memset(key, 0, 16); memset(pt, 0, 8); } else { fill(key, 16); fill(pt, 8); }
        for (j = 0; j < 4; j++) k[j] = be32(key + 4 * j);
        v[0] = be32(pt); v[1] = be32(pt + 4);
        tea_code(v, k);
        put_be32(ct, v[0]); put_be32(ct + 4, v[1]);
        emit("tea", key, 16, pt, ct, 8);
    }
    for (i = 0; i < VECTORS; i++) {
        if (i == 0) { memset(key, 0, 16); memset(pt, 0, 8); } else { fill(key, 16); fill(pt, 8); }
        for (j = 0; j < 4; j++) k[j] = be32(key + 4 * j);
        v[0] = be32(pt); v[1] = be32(pt + 4);
        xtea_encipher(v, k);
        put_be32(ct, v[0]); put_be32(ct + 4, v[1]);
        emit("xtea", key, 16, pt, ct, 8);
    }
    for (i = 0; i < VECTORS; i++) {
        if (i == 0) { memset(key, 0, 16); memset(pt, 0, 8); } else { fill(key, 16); fill(pt, 8); }
        for (j = 0; j < 4; j++) k[j] = be32(key + 4 * j);
        v[0] = be32(pt); v[1] = be32(pt + 4);
        btea(v, 2, k);
        put_be32(ct, v[0]); put_be32(ct + 4, v[1]);
        emit("xxtea", key, 16, pt, ct, 8);
        /* self-check decryption */
        btea(v, -2, k);
        if (v[0] != be32(pt) || v[1] != be32(pt + 4)) { fprintf(stderr, "btea decode mismatch\n"); return 1; }
    }
    for (i = 0; i < VECTORS; i++) {
        if (i == 0) { memset(key, 0, 16); memset(pt, 0, 16); } else { fill(key, 16); fill(pt, 16); }
        rc6_key_setup(S, key, 16);
        for (j = 0; j < 4; j++) v[j] = le32(pt + 4 * j);
        rc6_encrypt(S, v);
        for (j = 0; j < 4; j++) put_le32(ct + 4 * j, v[j]);
        emit("rc6", key, 16, pt, ct, 16);
    }
    for (i = 0; i < VECTORS; i++) {
        if (i == 0) {
            static const unsigned char nk[10] = {0x00,0x99,0x88,0x77,0x66,0x55,0x44,0x33,0x22,0x11};
            static const unsigned char np[8] = {0x33,0x22,0x11,0x00,0xdd,0xcc,0xbb,0xaa};
            memcpy(key, nk, 10); memcpy(pt, np, 8);
        } else { fill(key, 10); fill(pt, 8); }
        memcpy(ct, pt, 8);
        skipjack_encrypt(key, ct);
        emit("skipjack", key, 10, pt, ct, 8);
    }
    return 0;
}
