package com.example.crypto;

import java.security.MessageDigest;
import javax.crypto.Cipher;

public class LegacyCrypto {

    public Cipher makeCipher() throws Exception {
        Cipher cipher = Cipher.getInstance("AES");
        Cipher.getInstance("des");
        return cipher;
    }

    public byte[] fingerprint(byte[] data) throws Exception {
        MessageDigest digest = MessageDigest.getInstance("SHA-256");
        if (data.length > 0) {
            digest.update(data);
        }
        return digest.digest();
    }
}
