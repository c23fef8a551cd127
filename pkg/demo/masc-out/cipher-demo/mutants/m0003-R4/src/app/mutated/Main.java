package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            String maskVar0 = "DES";
            String maskVar1 = maskVar0;
            Cipher.getInstance(maskVar1);
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
