package com.example.crypto;

public class App {

    public static void main(String[] args) throws Exception {
        LegacyCrypto crypto = new LegacyCrypto();
        crypto.makeCipher();
        byte[] digest = crypto.fingerprint(new byte[] {1, 2, 3});
        for (byte b : digest) {
            System.out.printf("%02x", b);
        }
        System.out.println();
    }
}
