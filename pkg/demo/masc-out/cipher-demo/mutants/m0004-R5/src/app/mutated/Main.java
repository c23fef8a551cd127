package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            class MaskHelper0 {
                String algorithmName() {
                    return "DES";
                }
            }
            String maskVar0 = new MaskHelper0().algorithmName();
            Cipher.getInstance(maskVar0);
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
